#ifndef HYPERWAVE_CAUCHY_HPP
#define HYPERWAVE_CAUCHY_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hyperwave/genericity.hpp"
#include "hyperwave/lattice.hpp"
#include "hyperwave/seed.hpp"

namespace hyperwave {

struct CauchyParams {
    int d = 1;
    int grid = 64;  // modes per dimension; the state lives in the 2/3 ball
    int p = 2;
    double delta = 0.0;
    double dt = 0.01;
    double rho = 0.5;
    double blowup_threshold = 1e8;
};

/// Default step: min(0.01, 0.1/sqrt(delta)).
double default_dt(double delta);

/// First-order evolution of the wave equation in Fourier space with exact
/// linear rotation and a pseudospectral kick, composed by Strang splitting.
/// The working variable is u with Re u = v and Im u = -w, w = -D^{-1} v_t;
/// the nonlinear power is evaluated on a padded grid so no aliasing reaches
/// the retained modes.
class CauchySimulator {
  public:
    CauchySimulator(const CauchyParams& params, std::vector<Complex> u_hat);
    ~CauchySimulator();
    CauchySimulator(const CauchySimulator&) = delete;
    CauchySimulator& operator=(const CauchySimulator&) = delete;

    /// Initial data u1 = sum a_k e^{i j_k.x} from the seed, plus an optional
    /// deterministic random perturbation of the given amplitude on modes up
    /// to perturb_modes.
    static std::vector<Complex> seed_data(const CauchyParams& params, const LinearSeed& seed,
                                          double perturb_amp = 0.0, int perturb_modes = 0,
                                          std::uint64_t rng_seed = 0);

    /// One Strang step; dt may be negative (exact reverse map up to rounding).
    void step(double dt);

    double t() const { return t_; }
    int grid() const { return M_; }
    int retained_radius() const { return K_; }
    const CauchyParams& params() const { return params_; }
    const std::vector<Complex>& u_hat() const { return u_; }

    std::vector<Complex> v_hat() const;
    std::vector<Complex> w_hat() const;
    double norm_v() const;
    double norm_w() const;
    double energy() const;
    std::vector<double> mode_amplitudes() const;
    double conj_symmetry_defect() const;
    bool blown_up() const;

  private:
    CauchyParams params_;
    int M_, K_, P_;  // grid, retained radius, padded grid
    double t_ = 0;
    std::vector<Complex> u_;
    std::vector<double> freq_;  // sqrt(|k|^2 + 1) per index
    std::vector<int> knorm1_;
    struct Fft;
    std::unique_ptr<Fft> fft_;

    void kick(double dt);
    std::vector<double> v_physical_padded(int power_needed) const;
};

struct LifetimeRow {
    double t, norm_v, norm_w, excess, energy_drift;
};

struct LifetimeReport {
    std::vector<LifetimeRow> rows;
    double s0 = 0;
    double max_excess = 0;
    double pass_threshold = 0;
    bool pass = false;
    bool blew_up = false;
    double blowup_time = -1;
    double max_energy_drift = 0;  // relative
    double max_amp_drift = 0;     // per-mode amplitude drift (linear isometry check)
    double T = 0, dt = 0, delta = 0, A = 0;

    nlohmann::ordered_json to_json() const;
    std::string to_csv() const;
};

/// Integrates to T = delta^{-A} (or the explicit horizon) recording the
/// weighted norms; passes when the excess norm stays below excess_K * delta.
LifetimeReport lifetime_run(CauchySimulator& sim, double T, double A, double excess_K,
                            int checkpoints = 512);

struct ComparisonRow {
    std::string label;
    std::string certificate;  // yes / refuted / partially-verified
    double max_excess = 0;
    bool blew_up = false;
    double blowup_time = -1;
};

/// Side-by-side lifetime diagnostics over a list of seeds; observational.
std::vector<ComparisonRow> compare_generic_vs_tuned(const std::vector<LinearSeed>& seeds,
                                                    const CauchyParams& params, double A,
                                                    double excess_K);

}  // namespace hyperwave

#endif
