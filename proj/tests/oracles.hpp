#ifndef HYPERWAVE_TEST_ORACLES_HPP
#define HYPERWAVE_TEST_ORACLES_HPP

// Independent reference computations for the test suites.  Everything here
// deliberately avoids the library code paths it is used to check.

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "hyperwave/lattice.hpp"
#include "hyperwave/radical.hpp"
#include "hyperwave/seed.hpp"

namespace hyperwave::oracle {

/// High-precision evaluation of sum q_r sqrt(r) at the given precision.
inline double eval_radical_mpfr(const std::vector<std::pair<long, Rational>>& terms,
                                mpfr_prec_t prec = 200) {
    mpfr_t acc, term;
    mpfr_init2(acc, prec);
    mpfr_init2(term, prec);
    mpfr_set_zero(acc, 1);
    for (const auto& [r, q] : terms) {
        mpfr_sqrt_ui(term, static_cast<unsigned long>(r), MPFR_RNDN);
        mpfr_mul_q(term, term, q.get_mpq_t(), MPFR_RNDN);
        mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    double out = mpfr_get_d(acc, MPFR_RNDN);
    mpfr_clear(acc);
    mpfr_clear(term);
    return out;
}

/// Brute-force (p+1)-fold sumset of the resonant set, with multiplicity
/// dropped; enumerates tuples directly rather than convolving.
inline std::vector<LatticePoint> sumset_power(const std::vector<LatticePoint>& pts, int power) {
    std::vector<LatticePoint> acc = pts;
    for (int step = 1; step < power; ++step) {
        std::vector<LatticePoint> next;
        for (const auto& a : acc)
            for (const auto& b : pts) next.push_back(a + b);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

/// Characteristic membership through 256-bit arithmetic: |n.omega0 -+
/// sqrt(j^2+1)| below 1e-40 for either sign.  Independent of the exact
/// radical zero test.
inline bool on_characteristics_mpfr(const LinearSeed& seed, const LatticePoint& pt) {
    const mpfr_prec_t prec = 256;
    mpfr_t ndw, freq, tmp;
    mpfr_inits2(prec, ndw, freq, tmp, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(ndw, 1);
    for (int k = 0; k < seed.b(); ++k) {
        long m = 0;
        for (int v : seed.sites()[k]) m += static_cast<long>(v) * v;
        mpfr_sqrt_ui(tmp, static_cast<unsigned long>(m + 1), MPFR_RNDN);
        mpfr_mul_si(tmp, tmp, pt.n[k], MPFR_RNDN);
        mpfr_add(ndw, ndw, tmp, MPFR_RNDN);
    }
    mpfr_sqrt_ui(freq, static_cast<unsigned long>(pt.norm2sq_j() + 1), MPFR_RNDN);
    bool hit = false;
    for (int sign = -1; sign <= 1; sign += 2) {
        mpfr_mul_si(tmp, ndw, sign, MPFR_RNDN);
        mpfr_add(tmp, tmp, freq, MPFR_RNDN);
        mpfr_abs(tmp, tmp, MPFR_RNDN);
        if (mpfr_cmp_d(tmp, 1e-40) < 0) hit = true;
    }
    mpfr_clears(ndw, freq, tmp, static_cast<mpfr_ptr>(nullptr));
    return hit;
}

/// Pell-style brute force: all (n, j) with 0 < |n| <= nmax, |j| <= jmax and
/// j^2 - m n^2 = -1 (m = j1^2 + 1), i.e. the single-frequency characteristic
/// points, on the plus sheet (n < 0).
inline std::vector<std::pair<int, int>> pell_plus_points(long m, int nmax, int jmax) {
    std::vector<std::pair<int, int>> out;
    for (int n = -nmax; n < 0; ++n)
        for (int j = -jmax; j <= jmax; ++j)
            if (static_cast<long>(j) * j - m * static_cast<long>(n) * n == -1) out.emplace_back(n, j);
    return out;
}

/// First-order perturbation of the seed: the predicted leading correction
/// du(n, j) = -D^{-1} [(u0+conj u0)^{*(p+1)} / 2^{p+1}](n, j) / (n.omega0 + sqrt(j^2+1))
/// away from the resonant set.
inline Complex perturbation_coefficient(const LinearSeed& seed, const LatticePoint& pt) {
    SpectralCoeffs cube = convolution_power(seed.u0_plus_conj_series(), seed.p() + 1);
    double denom = 0;
    for (int k = 0; k < seed.b(); ++k)
        denom += pt.n[k] * seed.omega0()[k].to_double();
    denom += std::sqrt(static_cast<double>(pt.norm2sq_j()) + 1.0);
    double dinv = 1.0 / std::sqrt(static_cast<double>(pt.norm2sq_j()) + 1.0);
    return -dinv * cube.at(pt) / std::pow(2.0, seed.p() + 1) / denom;
}

inline double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

}  // namespace hyperwave::oracle

#endif
