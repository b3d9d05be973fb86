#ifndef HYPERWAVE_SEED_HPP
#define HYPERWAVE_SEED_HPP

#include <vector>

#include "hyperwave/lattice.hpp"
#include "hyperwave/radical.hpp"

namespace hyperwave {

/// The generic linear-solution data: b spatial sites j_k with positive
/// amplitudes a_k, unperturbed frequencies omega0_k = sqrt(j_k^2+1) kept
/// exactly, and the leading nonlinearity degree p.
class LinearSeed {
  public:
    LinearSeed(int d, std::vector<std::vector<int>> sites, std::vector<double> amplitudes, int p);

    int b() const { return static_cast<int>(sites_.size()); }
    int d() const { return d_; }
    int p() const { return p_; }
    const std::vector<std::vector<int>>& sites() const { return sites_; }
    const std::vector<double>& amplitudes() const { return amplitudes_; }
    const std::vector<RadicalNumber>& omega0() const { return omega0_; }
    std::vector<double> omega0_double() const;
    /// Amplitude scale ||a||_inf.
    double delta() const;

    LinearSeed with_amplitudes(std::vector<double> a) const;

    /// Fourier support point (-e_k, j_k) of the k-th seed mode.
    LatticePoint support_point(int k) const;
    /// Mirror point (e_k, -j_k), the support of the conjugate.
    LatticePoint conjugate_support_point(int k) const;
    /// Resonant set: both supports, 2b points.
    std::vector<LatticePoint> resonant_set() const;
    bool in_resonant_set(const LatticePoint& pt) const;

    /// Seed series u0 with u0(-e_k, j_k) = a_k (amplitude 1 if unit_amplitudes).
    SpectralCoeffs u0_series(bool unit_amplitudes = false) const;
    /// u0 + conj-mirror(u0); real-representing by construction.
    SpectralCoeffs u0_plus_conj_series(bool unit_amplitudes = false) const;
    /// v0 = (u0 + conj-mirror(u0)) / 2.
    SpectralCoeffs v0_series() const;

    /// n . omega0 as an exact radical number.
    RadicalNumber n_dot_omega0(const std::vector<int>& n) const;

  private:
    int d_, p_;
    std::vector<std::vector<int>> sites_;
    std::vector<double> amplitudes_;
    std::vector<RadicalNumber> omega0_;
};

/// alpha_m(x) coefficient series paired with its power offset m >= 2; the
/// term contributes alpha_m * v^{*(p+m)} to the nonlinearity.  alpha is
/// spatial (all time indices zero) and real-representing.
struct HTerm {
    int m;
    SpectralCoeffs alpha;
};
using HTerms = std::vector<HTerm>;

void validate_h_terms(const HTerms& terms, const LinearSeed& seed);

}  // namespace hyperwave

#endif
