#pragma once

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace uqbench {

/// Modeled operation counts. These are a deterministic cost model, not
/// hardware measurements.
double dense_factor_flops(std::size_t n);
double triangular_solve_flops(std::size_t n);
double fft_flops(std::size_t n);
/// Three length-n FFTs plus the O(n) spectral division.
double circulant_solve_flops(std::size_t n);

/// Cholesky factor of a symmetric positive-definite matrix with nugget
/// escalation: when the matrix as given is not numerically PD, an extra
/// jitter of t * mean(diag) is added for t = 1e-10, 1e-9, ..., 1e-6.
class SpdFactor {
public:
    explicit SpdFactor(const Eigen::MatrixXd& K, bool escalate = true);

    std::size_t size() const { return static_cast<std::size_t>(llt_.rows()); }
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    /// L^{-1} b, the half-solve used for quadratic forms b^T K^{-1} b.
    Eigen::VectorXd half_solve(const Eigen::VectorXd& rhs) const;
    double log_det() const;
    Eigen::MatrixXd lower() const { return llt_.matrixL(); }

    double jitter() const { return jitter_; }
    int escalations() const { return escalations_; }
    double factor_flops() const { return dense_factor_flops(size()); }

private:
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double jitter_ = 0.0;
    int escalations_ = 0;
};

struct DenseSolveResult {
    Eigen::MatrixXd solution;
    double flops_linear = 0.0;
    double jitter = 0.0;
    int escalations = 0;
};

/// Solves K X = rhs for symmetric K; flops_linear = n^3/3 + 2 n^2 (#rhs).
/// Throws NumericalError if K is not PD after escalation.
DenseSolveResult dense_solve(const Eigen::MatrixXd& K, const Eigen::MatrixXd& rhs);

/// In-place-style FFT: forward uses exp(-2 pi i jk/n), inverse includes 1/n.
/// Any length; non-powers of two go through Bluestein's chirp transform.
std::vector<std::complex<double>> fft(std::vector<std::complex<double>> a, bool inverse = false);

struct CirculantSolveResult {
    std::vector<double> solution;
    std::vector<double> eigenvalues;
    std::size_t floored_modes = 0;
    double flops_linear = 0.0;
};

/// Solves C x = rhs for the circulant C with C_ij = first_row[(j - i) mod n]
/// by FFT diagonalization. Eigenvalues below 1e-12 * max |eigenvalue| are
/// treated as zero and inverted to zero (pseudo-inverse); their count is
/// reported in floored_modes.
CirculantSolveResult circulant_solve(std::span<const double> first_row, std::span<const double> rhs);

} // namespace uqbench
