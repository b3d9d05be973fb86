#ifndef HYPERWAVE_OPERATOR_BOX_HPP
#define HYPERWAVE_OPERATOR_BOX_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hyperwave/characteristics.hpp"
#include "hyperwave/lattice.hpp"
#include "hyperwave/seed.hpp"

namespace hyperwave {

/// Convolution kernel of the block operator: (u0 + conj u0)^{*p}, evaluated
/// at the seed amplitudes (or at the given override).
SpectralCoeffs a0_kernel(const LinearSeed& seed,
                         const std::vector<double>* amplitudes = nullptr);

/// Jacobian kernel at the linearization point v: (p+1) v^{*p} plus the exact
/// contributions (p+m) alpha_m * v^{*(p+m-1)} of the analytic tail.
SpectralCoeffs linearization_kernel(const SpectralCoeffs& v, int p, const HTerms& h_terms);

/// The truncated doubled linearized operator on ||n||_1 <= N, ||j||_inf <= j_radius.
/// Rows [0, P) are u-rows, rows [P, 2P) the conjugate rows, in point order.
struct OperatorBox {
    int b = 1, d = 1, p = 1;
    int n_radius = 0, j_radius = 0;
    std::vector<double> omega;
    std::vector<LatticePoint> points;
    std::map<LatticePoint, int> index;
    std::vector<double> diag_u, diag_ubar;
    std::vector<char> char_u, char_ubar;  // exact-zero diagonal at omega0
    SpectralCoeffs half_kernel;           // G/2; off-diagonal entry = w_row * halfkernel(delta)

    int point_count() const { return static_cast<int>(points.size()); }
    int rows() const { return 2 * point_count(); }
    Eigen::SparseMatrix<Complex> matrix() const;
    /// Doubled row indices whose diagonal vanishes exactly at omega0.
    std::vector<int> characteristic_rows() const;
};

OperatorBox assemble_FprimeN(const LinearSeed& seed, const std::vector<double>& omega, int N,
                             int j_radius, const HTerms& h_terms = {},
                             const SpectralCoeffs* linearization_u = nullptr);

/// One block of the characteristic-projected convolution operator.  Rows are
/// (point, is_conjugate_row) pairs; entries are the real kernel values.
struct CharBlock {
    std::vector<std::pair<LatticePoint, bool>> rows;
    Eigen::MatrixXd mat;
};

/// Principal submatrix of the doubled convolution operator on the
/// characteristic rows (u-rows on the plus sheet, conjugate rows on the
/// minus sheet), split into its connected blocks.
std::vector<CharBlock> restrict_PA0P(const SpectralCoeffs& kernel, const CharacteristicSet& cs);

/// Structural cross-check: block point sets must coincide with the gamma-step
/// components of the characteristic set.
bool blocks_match_components(const std::vector<CharBlock>& blocks, const ComponentReport& report);

struct BlockGapEntry {
    std::vector<std::pair<LatticePoint, bool>> rows;
    double sigma_min = 0;
    double inverse_norm = 0;
    bool singular = false;
};

struct GapReport {
    double inverse_norm = 0;
    double bound = 0;
    double epsilon = 0;
    double a_inf = 0;
    bool pass = false;
    std::vector<BlockGapEntry> blocks;
    // Truncated-operator diagnostics.
    double pc_inverse_norm = -1;
    double coupling_norm = -1;
    double pa0p_inverse_norm = -1;
    double delta = 0;
    double q_used = 0;
    int N = 0;
    std::vector<int> exact_zero_rows;
    nlohmann::ordered_json to_json() const;
};

/// Spectral-norm gap of the projected convolution blocks against the
/// threshold (eps * a_inf^p)^{-1}.  Singular blocks are data, not errors.
GapReport block_gap(const std::vector<CharBlock>& blocks, double eps, double a_inf, int p);

struct Prop1Measure {
    std::vector<double> eps;
    std::vector<double> pass_fraction;
    long samples = 0;
};

/// Monte Carlo pass fraction of the block gap over amplitudes drawn
/// uniformly from (0, a_inf]^b; eps_list must be decreasing.
Prop1Measure measure_estimate_prop1(const LinearSeed& seed_template, const LatticeBox& box,
                                    std::vector<double> eps_list, double a_inf, long samples,
                                    std::uint64_t rng_seed);

struct SchurResult {
    Eigen::MatrixXcd H;
    bool ok = false;
    double pc_sigma_min = 0;  // condition evidence when rejected
};

/// Effective operator on the P rows: H = A_PP - lambda + A_PC (A_CC - lambda)^{-1} A_CP.
/// Rejected (ok = false) when the complement block is singular within sing_tol.
SchurResult schur_reduce(const Eigen::MatrixXcd& A, const std::vector<int>& p_rows, double lambda,
                         double sing_tol = 1e-12);
SchurResult schur_reduce(const OperatorBox& op, double lambda, double sing_tol = 1e-12);

/// Smallest singular value; dense SVD below the size threshold, otherwise
/// inverse power iteration through a sparse factorization.
double sigma_min_sparse(const Eigen::SparseMatrix<Complex>& A, double tol = 1e-10,
                        int max_iters = 2000);
double sigma_min_of(const Eigen::SparseMatrix<Complex>& A, int dense_threshold = 1024);

struct GapOptions {
    double dn_smallness = 0.1;  // delta * N must stay below this
    int dense_threshold = 1024;
};

/// Full spectral-gap report for the truncated operator per the Schur route:
/// the inverse norm against N^q/(eps delta^p), plus the complement inverse
/// norm, the coupling norm, and the projected-block gap.
GapReport gap_prop3(const LinearSeed& seed, const OperatorBox& op, double eps, double q,
                    const GapOptions& opts = {});

}  // namespace hyperwave

#endif
