#include "uqbench/points.hpp"

#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"

#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace uqbench {

std::string_view to_string(Generator g)
{
    switch (g) {
    case Generator::iid: return "iid";
    case Generator::sobol: return "sobol";
    case Generator::lattice: return "lattice";
    }
    return "?";
}

std::string_view to_string(Randomization r)
{
    switch (r) {
    case Randomization::none: return "none";
    case Randomization::shift_mod1: return "shift_mod1";
    case Randomization::digital_shift: return "digital_shift";
    case Randomization::nested_scramble: return "nested_scramble";
    }
    return "?";
}

Randomization parse_randomization(std::string_view name)
{
    for (auto r : {Randomization::none, Randomization::shift_mod1, Randomization::digital_shift,
                   Randomization::nested_scramble}) {
        if (name == to_string(r)) return r;
    }
    throw ValidationError("unknown randomization '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Direction numbers

SobolTable SobolTable::parse(std::string_view text)
{
    SobolTable table;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t expected_dim = 2;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#' || line[first] == 'd') continue;
        std::istringstream fields(line);
        std::size_t dim = 0;
        unsigned s = 0;
        std::uint64_t a = 0;
        if (!(fields >> dim >> s >> a))
            throw ValidationError("direction numbers line " + std::to_string(line_no) +
                                  ": expected 'd s a m_1..m_s'");
        if (dim != expected_dim)
            throw ValidationError("direction numbers line " + std::to_string(line_no) +
                                  ": dimensions must be consecutive from 2");
        if (s == 0 || s > 31 || a >= (std::uint64_t{1} << (s - 1)))
            throw ValidationError("direction numbers line " + std::to_string(line_no) +
                                  ": bad polynomial degree/coefficients");
        Entry e;
        e.s = s;
        e.a = static_cast<std::uint32_t>(a);
        for (unsigned k = 0; k < s; ++k) {
            std::uint64_t m = 0;
            if (!(fields >> m))
                throw ValidationError("direction numbers line " + std::to_string(line_no) +
                                      ": expected " + std::to_string(s) + " m values");
            // m_k must be odd and below 2^k (k 1-based).
            if (m % 2 == 0 || m >= (std::uint64_t{1} << (k + 1)))
                throw ValidationError("direction numbers line " + std::to_string(line_no) +
                                      ": invalid m value " + std::to_string(m));
            e.m.push_back(static_cast<std::uint32_t>(m));
        }
        table.entries_.push_back(std::move(e));
        ++expected_dim;
    }
    return table;
}

SobolTable SobolTable::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot read direction numbers file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const SobolTable& SobolTable::builtin()
{
    static const SobolTable table = parse(builtin_direction_numbers_text());
    return table;
}

const SobolTable& SobolTable::active()
{
    const char* path = std::getenv("UQBENCH_DIRECTION_NUMBERS");
    if (path == nullptr || *path == '\0') return builtin();
    static std::mutex mutex;
    static std::map<std::string, std::unique_ptr<SobolTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[path];
    if (!slot) slot = std::make_unique<SobolTable>(load(path));
    return *slot;
}

std::array<std::uint32_t, SobolTable::kBits> SobolTable::directions(std::size_t j) const
{
    std::array<std::uint32_t, kBits> v{};
    if (j == 0) {
        for (int i = 0; i < kBits; ++i) v[i] = 1u << (31 - i);
        return v;
    }
    if (j > entries_.size())
        throw UnsupportedDimension("Sobol dimension " + std::to_string(j + 1) +
                                   " exceeds direction-number table limit " +
                                   std::to_string(max_dimension()));
    const Entry& e = entries_[j - 1];
    const unsigned s = e.s;
    for (unsigned i = 0; i < s && i < static_cast<unsigned>(kBits); ++i)
        v[i] = e.m[i] << (31 - i);
    for (unsigned i = s; i < static_cast<unsigned>(kBits); ++i) {
        v[i] = v[i - s] ^ (v[i - s] >> s);
        for (unsigned k = 1; k < s; ++k)
            v[i] ^= ((e.a >> (s - 1 - k)) & 1u) * v[i - k];
    }
    return v;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

void require_shape(std::size_t n, std::size_t d)
{
    if (n < 1) throw ValidationError("point count n must be >= 1");
    if (d < 1) throw ValidationError("dimension d must be >= 1");
}

constexpr double kTwoPow32Inv = 0x1.0p-32;

inline std::uint32_t to_digits(double x)
{
    return static_cast<std::uint32_t>(x * 0x1.0p32);
}

std::uint32_t nested_scramble_digits(std::uint32_t v, std::uint64_t key)
{
    // Bit k (from the most significant) is flipped by a random function of
    // the k preceding bits: a hash-indexed random binary tree of depth 32.
    std::uint32_t out = 0;
    for (int k = 0; k < 32; ++k) {
        const std::uint64_t prefix = k == 0 ? 0 : static_cast<std::uint64_t>(v >> (32 - k));
        const std::uint64_t h = mix64(key ^ mix64((static_cast<std::uint64_t>(k) << 32) | prefix));
        const std::uint32_t bit = (v >> (31 - k)) & 1u;
        out |= (bit ^ static_cast<std::uint32_t>(h >> 63)) << (31 - k);
    }
    return out;
}

} // namespace

PointSet iid_points(std::size_t n, std::size_t d, RngStream stream)
{
    require_shape(n, d);
    PointSet ps;
    ps.n = n;
    ps.d = d;
    ps.generator = Generator::iid;
    ps.seed = stream.seed;
    ps.stream_id = stream.stream_id;
    ps.coords.resize(n * d);
    Philox rng(stream);
    for (auto& x : ps.coords) x = rng.uniform();
    return ps;
}

PointSet sobol_points(std::size_t n, std::size_t d)
{
    return sobol_points(n, d, SobolTable::active());
}

PointSet sobol_points(std::size_t n, std::size_t d, const SobolTable& table)
{
    require_shape(n, d);
    if (d > table.max_dimension())
        throw UnsupportedDimension("Sobol dimension " + std::to_string(d) +
                                   " exceeds direction-number table limit " +
                                   std::to_string(table.max_dimension()));
    if (n > (std::size_t{1} << 32))
        throw ValidationError("Sobol point count exceeds 2^32 at 32-bit digit depth");

    std::vector<std::array<std::uint32_t, SobolTable::kBits>> dirs(d);
    for (std::size_t j = 0; j < d; ++j) dirs[j] = table.directions(j);

    PointSet ps;
    ps.n = n;
    ps.d = d;
    ps.generator = Generator::sobol;
    ps.coords.resize(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            std::uint32_t x = 0;
            std::uint64_t bits = i;
            for (int b = 0; bits != 0; ++b, bits >>= 1)
                if (bits & 1u) x ^= dirs[j][b];
            ps.coords[i * d + j] = x * kTwoPow32Inv;
        }
    }
    return ps;
}

PointSet lattice_points(std::size_t n, std::span<const std::uint64_t> gen_vector)
{
    require_shape(n, gen_vector.size());
    const std::size_t d = gen_vector.size();
    PointSet ps;
    ps.n = n;
    ps.d = d;
    ps.generator = Generator::lattice;
    ps.gen_vector.assign(gen_vector.begin(), gen_vector.end());
    for (std::size_t k = 0; k < d; ++k) {
        const std::uint64_t g = gen_vector[k] % n;
        if (n > 1 && std::gcd(g, static_cast<std::uint64_t>(n)) != 1)
            ps.warnings.push_back("generating vector entry " + std::to_string(gen_vector[k]) +
                                  " is not coprime to n=" + std::to_string(n));
    }
    ps.coords.resize(n * d);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            // Exact integer residue first, so frac(i*g/n) never rounds up to 1.
            const auto r = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(i) * (gen_vector[k] % n)) % n);
            ps.coords[i * d + k] = static_cast<double>(r) * inv_n;
        }
    }
    return ps;
}

std::vector<std::uint64_t> cbc_lattice_vector(std::size_t n, std::size_t d, double gamma)
{
    require_shape(n, d);
    if (!(gamma > 0.0)) throw ValidationError("CBC weight gamma must be positive");
    std::vector<std::uint64_t> z;
    z.reserve(d);
    if (n == 1) return std::vector<std::uint64_t>(d, 1);

    // omega[j] = 1 + gamma * 2 pi^2 * B2(j/n)
    std::vector<double> omega(n);
    const double c = gamma * 2.0 * 9.869604401089358;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(n);
        omega[j] = 1.0 + c * (t * t - t + 1.0 / 6.0);
    }
    std::vector<double> running(n, 1.0);
    z.push_back(1);
    for (std::size_t k = 0; k < n; ++k) running[k] *= omega[k];

    for (std::size_t dim = 1; dim < d; ++dim) {
        std::uint64_t best = 1;
        double best_err = std::numeric_limits<double>::infinity();
        for (std::uint64_t cand = 1; cand <= n / 2; ++cand) {
            if (std::gcd(cand, static_cast<std::uint64_t>(n)) != 1) continue;
            double s = 0.0;
            std::uint64_t idx = 0;
            for (std::size_t k = 0; k < n; ++k) {
                s += running[k] * omega[idx];
                idx += cand;
                if (idx >= n) idx -= n;
            }
            if (s < best_err) {
                best_err = s;
                best = cand;
            }
        }
        z.push_back(best);
        std::uint64_t idx = 0;
        for (std::size_t k = 0; k < n; ++k) {
            running[k] *= omega[idx];
            idx += best;
            if (idx >= n) idx -= n;
        }
    }
    return z;
}

PointSet randomize(const PointSet& ps, Randomization kind, RngStream stream)
{
    PointSet out = ps;
    out.seed = stream.seed;
    out.stream_id = stream.stream_id;
    if (kind == Randomization::none) return out;

    if (ps.generator == Generator::iid) {
        out.warnings.push_back("randomization of iid points is a no-op");
        return out;
    }
    const bool lattice = ps.generator == Generator::lattice;
    const bool digital = kind == Randomization::digital_shift || kind == Randomization::nested_scramble;
    if (lattice && digital)
        throw ValidationError(std::string(to_string(kind)) + " is not defined for lattice points; use shift_mod1");
    if (!lattice && kind == Randomization::shift_mod1)
        throw ValidationError("shift_mod1 is for lattices; use digital_shift or nested_scramble for Sobol points");

    out.randomization = kind;
    Philox rng(stream);
    const std::size_t d = ps.d;
    switch (kind) {
    case Randomization::shift_mod1: {
        std::vector<double> shift(d);
        for (auto& s : shift) s = rng.uniform();
        for (std::size_t i = 0; i < ps.n; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double x = ps.coords[i * d + j] + shift[j];
                if (x >= 1.0) x -= 1.0;
                out.coords[i * d + j] = x;
            }
        break;
    }
    case Randomization::digital_shift: {
        std::vector<std::uint32_t> shift(d);
        for (auto& s : shift) s = rng.next_u32();
        for (std::size_t i = 0; i < ps.n; ++i)
            for (std::size_t j = 0; j < d; ++j)
                out.coords[i * d + j] = (to_digits(ps.coords[i * d + j]) ^ shift[j]) * kTwoPow32Inv;
        break;
    }
    case Randomization::nested_scramble: {
        std::vector<std::uint64_t> keys(d);
        for (auto& k : keys) k = rng.next_u64();
        for (std::size_t i = 0; i < ps.n; ++i)
            for (std::size_t j = 0; j < d; ++j)
                out.coords[i * d + j] =
                    nested_scramble_digits(to_digits(ps.coords[i * d + j]), keys[j]) * kTwoPow32Inv;
        break;
    }
    case Randomization::none: break;
    }
    return out;
}

std::string to_csv(const PointSet& ps)
{
    std::string gen(to_string(ps.generator));
    if (ps.generator == Generator::lattice) {
        gen += "[";
        for (std::size_t k = 0; k < ps.gen_vector.size(); ++k) {
            if (k) gen += ' ';
            gen += std::to_string(ps.gen_vector[k]);
        }
        gen += "]";
    }
    std::string out = "# generator=" + gen + ", randomization=" + std::string(to_string(ps.randomization)) +
                      ", seed=" + std::to_string(ps.seed) + ", n=" + std::to_string(ps.n) +
                      ", d=" + std::to_string(ps.d) + "\n";
    for (std::size_t i = 0; i < ps.n; ++i) {
        for (std::size_t j = 0; j < ps.d; ++j) {
            if (j) out += ',';
            out += format_roundtrip(ps(i, j));
        }
        out += '\n';
    }
    return out;
}

} // namespace uqbench
