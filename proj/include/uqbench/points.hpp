#pragma once

#include "uqbench/rng.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uqbench {

enum class Generator { iid, sobol, lattice };
enum class Randomization { none, shift_mod1, digital_shift, nested_scramble };

std::string_view to_string(Generator g);
std::string_view to_string(Randomization r);
Randomization parse_randomization(std::string_view name);

/// n points in [0,1)^d, stored row-major, plus the metadata needed to
/// regenerate them bit-for-bit.
struct PointSet {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> coords;
    Generator generator = Generator::iid;
    std::vector<std::uint64_t> gen_vector; // lattice only
    Randomization randomization = Randomization::none;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::vector<std::string> warnings;

    std::span<const double> point(std::size_t i) const { return {coords.data() + i * d, d}; }
    double operator()(std::size_t i, std::size_t j) const { return coords[i * d + j]; }
};

/// Direction numbers for the base-2 Sobol sequence in the Joe-Kuo text
/// layout: one line per dimension `d s a m_1 .. m_s`, dimension 1 implicit.
class SobolTable {
public:
    static constexpr int kBits = 32;

    static SobolTable parse(std::string_view text);
    static SobolTable load(const std::string& path);

    /// Compiled-in table (new-joe-kuo-6.21201, first 50 dimensions).
    static const SobolTable& builtin();

    /// Table at $UQBENCH_DIRECTION_NUMBERS when set, builtin() otherwise.
    static const SobolTable& active();

    std::size_t max_dimension() const { return 1 + entries_.size(); }

    /// 32 direction integers for dimension j (0-based), MSB-aligned.
    std::array<std::uint32_t, kBits> directions(std::size_t j) const;

private:
    struct Entry {
        unsigned s = 0;
        std::uint32_t a = 0;
        std::vector<std::uint32_t> m;
    };
    std::vector<Entry> entries_;
};

/// The embedded direction-number table as text (same layout as the data file).
std::string_view builtin_direction_numbers_text();

PointSet iid_points(std::size_t n, std::size_t d, RngStream stream);

/// First n points of the Sobol sequence in natural (non-Gray) order.
PointSet sobol_points(std::size_t n, std::size_t d);
PointSet sobol_points(std::size_t n, std::size_t d, const SobolTable& table);

/// Rank-1 lattice: point j has coordinates frac(j * g_k / n), in index order.
PointSet lattice_points(std::size_t n, std::span<const std::uint64_t> gen_vector);

/// Component-by-component generating vector minimizing the worst-case error
/// in the weighted Korobov space with the B2 kernel, product weights gamma.
std::vector<std::uint64_t> cbc_lattice_vector(std::size_t n, std::size_t d, double gamma = 1.0);

/// Random shift (lattices), digital shift or nested scramble (Sobol).
/// iid inputs are returned unchanged with a warning.
PointSet randomize(const PointSet& ps, Randomization kind, RngStream stream);

/// CSV with the `# generator=..., randomization=..., seed=..., n=..., d=...`
/// header line followed by one row per point.
std::string to_csv(const PointSet& ps);

} // namespace uqbench
