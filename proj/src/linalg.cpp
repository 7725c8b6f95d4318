#include "uqbench/linalg.hpp"

#include "uqbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace uqbench {

double dense_factor_flops(std::size_t n)
{
    const double m = static_cast<double>(n);
    return m * m * m / 3.0;
}

double triangular_solve_flops(std::size_t n)
{
    const double m = static_cast<double>(n);
    return 2.0 * m * m;
}

double fft_flops(std::size_t n)
{
    if (n < 2) return 0.0;
    const double m = static_cast<double>(n);
    return 5.0 * m * std::log2(m);
}

double circulant_solve_flops(std::size_t n)
{
    return 3.0 * fft_flops(n) + 6.0 * static_cast<double>(n);
}

// ---------------------------------------------------------------------------

SpdFactor::SpdFactor(const Eigen::MatrixXd& K, bool escalate)
{
    if (K.rows() != K.cols()) throw ValidationError("dense factorization needs a square matrix");
    llt_.compute(K);
    auto ok = [this] {
        return llt_.info() == Eigen::Success && llt_.matrixLLT().diagonal().allFinite() &&
               (llt_.matrixLLT().diagonal().array() > 0.0).all();
    };
    if (K.rows() == 0 || ok()) return;
    if (escalate) {
        const double mean_diag = K.diagonal().mean();
        if (mean_diag > 0.0 && std::isfinite(mean_diag)) {
            for (double t = 1e-10; t <= 1.0000001e-6; t *= 10.0) {
                ++escalations_;
                jitter_ = t * mean_diag;
                Eigen::MatrixXd Kj = K;
                Kj.diagonal().array() += jitter_;
                llt_.compute(Kj);
                if (ok()) return;
            }
        }
    }
    throw NumericalError("matrix of size " + std::to_string(K.rows()) +
                         " is not positive definite" + (escalate ? " after nugget escalation to 1e-6" : ""));
}

Eigen::MatrixXd SpdFactor::solve(const Eigen::MatrixXd& rhs) const
{
    return llt_.solve(rhs);
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& rhs) const
{
    return llt_.solve(rhs);
}

Eigen::VectorXd SpdFactor::half_solve(const Eigen::VectorXd& rhs) const
{
    return llt_.matrixL().solve(rhs);
}

double SpdFactor::log_det() const
{
    return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

DenseSolveResult dense_solve(const Eigen::MatrixXd& K, const Eigen::MatrixXd& rhs)
{
    if (rhs.rows() != K.rows()) throw ValidationError("right-hand side length does not match the matrix");
    const SpdFactor factor(K);
    DenseSolveResult r;
    r.solution = factor.solve(rhs);
    r.jitter = factor.jitter();
    r.escalations = factor.escalations();
    r.flops_linear = dense_factor_flops(factor.size()) +
                     triangular_solve_flops(factor.size()) * static_cast<double>(rhs.cols());
    return r;
}

// ---------------------------------------------------------------------------

namespace {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<cplx>& a, bool inverse)
{
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                // Twiddles from the angle directly keep rounding independent of k.
                const cplx w(std::cos(ang * static_cast<double>(k)), std::sin(ang * static_cast<double>(k)));
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

void fft_bluestein(std::vector<cplx>& a, bool inverse)
{
    const std::size_t n = a.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the angle argument small and exact.
        const auto k2 = static_cast<double>((static_cast<unsigned __int128>(k) * k) % (2 * n));
        const double ang = sign * std::numbers::pi * k2 / static_cast<double>(n);
        chirp[k] = cplx(std::cos(ang), std::sin(ang));
    }
    std::vector<cplx> x(m), y(m);
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
    y[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);
    fft_radix2(x, false);
    fft_radix2(y, false);
    for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
    fft_radix2(x, true);
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] / static_cast<double>(m) * chirp[k];
}

} // namespace

std::vector<cplx> fft(std::vector<cplx> a, bool inverse)
{
    const std::size_t n = a.size();
    if (n <= 1) return a;
    if (is_power_of_two(n))
        fft_radix2(a, inverse);
    else
        fft_bluestein(a, inverse);
    if (inverse)
        for (auto& v : a) v /= static_cast<double>(n);
    return a;
}

CirculantSolveResult circulant_solve(std::span<const double> first_row, std::span<const double> rhs)
{
    const std::size_t n = first_row.size();
    if (n == 0) throw ValidationError("circulant solve needs a non-empty first row");
    if (rhs.size() != n)
        throw ValidationError("circulant solve: rhs length " + std::to_string(rhs.size()) +
                              " does not match n=" + std::to_string(n));

    // (C x)_i = sum_m r_m x_{i+m}; in Fourier space X_k * conj(R_k) for real r.
    std::vector<cplx> r(first_row.begin(), first_row.end());
    std::vector<cplx> b(rhs.begin(), rhs.end());
    const auto R = fft(std::move(r));
    auto B = fft(std::move(b));

    CirculantSolveResult out;
    out.eigenvalues.resize(n);
    double max_abs = 0.0;
    for (std::size_t k = 0; k < n; ++k) max_abs = std::max(max_abs, std::abs(R[k]));
    const double floor = 1e-12 * max_abs;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx lambda = std::conj(R[k]);
        out.eigenvalues[k] = lambda.real();
        if (std::abs(lambda) <= floor) {
            B[k] = 0.0;
            ++out.floored_modes;
        } else {
            B[k] /= lambda;
        }
    }
    const auto x = fft(std::move(B), true);
    out.solution.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.solution[k] = x[k].real();
    out.flops_linear = circulant_solve_flops(n);
    return out;
}

} // namespace uqbench
