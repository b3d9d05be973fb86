#ifndef HYPERWAVE_SOLVER_HPP
#define HYPERWAVE_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "hyperwave/lattice.hpp"
#include "hyperwave/operator_box.hpp"
#include "hyperwave/seed.hpp"

namespace hyperwave {

/// Residual of the doubled lattice system at (u, omega), reported on the
/// u-rows over the full generated support; the conjugate-row residual is the
/// mirror conjugate.  With include_primary = false only the analytic-tail
/// terms enter the nonlinearity (linear-case diagnostics).
SpectralCoeffs residual_F(const SpectralCoeffs& u, const std::vector<double>& omega,
                          const LinearSeed& seed, const HTerms& h_terms = {},
                          bool include_primary = true);

/// Truncation box for the solver: |n_k| <= n_radius, |j_i| <= j_radius per
/// component.
struct SolverBox {
    int n_radius = 8;
    int j_radius = 8;
};

struct DoubledRow {
    LatticePoint pt;
    bool conjugate = false;
    bool operator<(const DoubledRow& o) const {
        return conjugate != o.conjugate ? conjugate < o.conjugate : pt < o.pt;
    }
    bool operator==(const DoubledRow& o) const { return conjugate == o.conjugate && pt == o.pt; }
};

/// Lyapunov-Schmidt partition of the doubled rows over the box: the Q rows
/// are the 2b resonant rows (seed support on the u side, its conjugate on
/// the other); everything else is a P row.
struct LsSplit {
    std::vector<DoubledRow> p_rows;
    std::vector<DoubledRow> q_rows;
};
LsSplit lyapunov_schmidt_split(const LinearSeed& seed, const SolverBox& box);

struct NewtonState {
    SpectralCoeffs u;  // u-half; the conjugate half is the mirror conjugate
    std::vector<double> omega;
    int iterate = 0;
    double residual_norm = 0;
    std::vector<double> history;  // residual norms, starting with the initial one
    SolverBox box;
    double sym_defect = 0;        // doubled-solve mirror-symmetry defect
    bool last_step_rejected = false;
};

struct SingularLinearization : std::runtime_error {
    explicit SingularLinearization(const std::string& what) : std::runtime_error(what) {}
};

NewtonState initial_state(const LinearSeed& seed, const SolverBox& box, const HTerms& h_terms,
                          const AnalyticNorm& nrm);

/// One Newton update of the P equations with omega frozen; u stays pinned on
/// the resonant set.  A non-decreasing residual rejects the step (state
/// returned unchanged with the flag raised); a singular linearization throws.
NewtonState newton_step(const NewtonState& state, const LinearSeed& seed, const HTerms& h_terms,
                        const AnalyticNorm& nrm);

/// Modulated frequencies from the resonant rows:
/// omega_k = sqrt(j_k^2+1) + w_k * Vhat(-e_k, j_k) / a_k with Vhat the
/// nonlinear convolution part at the current iterate.
std::vector<double> q_equation_update(const NewtonState& state, const LinearSeed& seed,
                                      const HTerms& h_terms, bool include_primary = true);

struct SolveOptions {
    SolverBox box;
    double tol = 1e-11;
    int max_iter = 30;
    double rho = 0.5;
    bool auto_box = false;          // radius ceil(|log delta|^s) when set
    double box_exponent = 1.5;
    double history_floor = 1e-15;   // convergence-order fit ignores values below
};

struct SolutionArtifact {
    SpectralCoeffs u;
    std::vector<double> omega;
    double residual_norm = 0;
    double remainder_norm = 0;  // ||u - u0|| weighted
    std::vector<double> history;
    bool converged = false;
    std::string failure_reason;
    int iterations = 0;
    double omega_first_update = 0;   // omega_1 after the first Q update
    double convergence_order = 0;    // 3-point estimate over the usable tail
    double quadratic_constant = 0;   // max r_{m+1}/r_m^2 over accepted steps
    double sym_defect = 0;
    std::vector<double> frequency_shift;  // omega_k - sqrt(j_k^2+1)
    SolverBox box;
    double rho = 0.5;

    nlohmann::ordered_json to_json() const;
    static SolutionArtifact from_json(const nlohmann::json& j);
};

/// Alternates Newton P-steps and Q updates to joint convergence.
SolutionArtifact solve(const LinearSeed& seed, const HTerms& h_terms, const SolveOptions& opt);

struct TransversalityReport {
    std::vector<double> deltas;
    std::vector<double> det_rescaled;        // |det d omega^(1) / d (a/delta)|
    std::vector<double> det_unrescaled;      // |det d omega^(1) / d a|
    double slope_rescaled = 0;               // log-log slope, expect p*b
    double slope_unrescaled = 0;             // expect (p-1)*b
    std::vector<std::vector<std::vector<double>>> jacobians;  // per delta, b x b
    std::string note;
    nlohmann::ordered_json to_json() const;
};

/// Central finite-difference Jacobian of the first-update frequencies with
/// respect to the amplitudes, on a delta grid, in both the rescaled and raw
/// conventions.
TransversalityReport transversality(const LinearSeed& seed_template, const HTerms& h_terms,
                                    const std::vector<double>& delta_grid,
                                    double fd_step_rel = 1e-5);

/// Max pointwise residual of the second-order wave equation for the
/// synthesized quasi-periodic v(t, x) on a uniform phase grid.
double synthesis_residual(const SolutionArtifact& artifact, const LinearSeed& seed,
                          const HTerms& h_terms = {}, int grid = 64);

}  // namespace hyperwave

#endif
