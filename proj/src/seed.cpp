#include "hyperwave/seed.hpp"

#include <algorithm>
#include <cmath>

namespace hyperwave {

LinearSeed::LinearSeed(int d, std::vector<std::vector<int>> sites, std::vector<double> amplitudes,
                       int p)
    : d_(d), p_(p), sites_(std::move(sites)), amplitudes_(std::move(amplitudes)) {
    if (d_ < 1) throw std::invalid_argument("seed: d must be >= 1");
    if (p_ < 1) throw std::invalid_argument("seed: p must be >= 1");
    if (sites_.empty()) throw std::invalid_argument("seed: need at least one site (b >= 1)");
    if (amplitudes_.size() != sites_.size())
        throw std::invalid_argument("seed: amplitude count must match site count");
    for (std::size_t k = 0; k < sites_.size(); ++k) {
        if (static_cast<int>(sites_[k].size()) != d_)
            throw std::invalid_argument("seed: site dimension must equal d");
        bool all_zero = std::all_of(sites_[k].begin(), sites_[k].end(), [](int v) { return v == 0; });
        if (all_zero) throw std::invalid_argument("seed: sites must be nonzero (j_k != 0)");
        if (amplitudes_[k] <= 0) throw std::invalid_argument("seed: amplitudes must be positive");
        for (std::size_t k2 = 0; k2 < k; ++k2)
            if (sites_[k2] == sites_[k])
                throw std::invalid_argument("seed: sites must be pairwise distinct (j_k != j_k')");
    }
    omega0_.reserve(sites_.size());
    for (const auto& s : sites_) {
        long n2 = 0;
        for (int v : s) n2 += static_cast<long>(v) * v;
        omega0_.push_back(RadicalNumber::sqrt_int(n2 + 1));
    }
}

std::vector<double> LinearSeed::omega0_double() const {
    std::vector<double> out;
    out.reserve(omega0_.size());
    for (const auto& w : omega0_) out.push_back(w.to_double());
    return out;
}

double LinearSeed::delta() const {
    double m = 0;
    for (double a : amplitudes_) m = std::max(m, a);
    return m;
}

LinearSeed LinearSeed::with_amplitudes(std::vector<double> a) const {
    return LinearSeed(d_, sites_, std::move(a), p_);
}

LatticePoint LinearSeed::support_point(int k) const {
    std::vector<int> n(b(), 0);
    n[k] = -1;
    return LatticePoint(std::move(n), sites_[k]);
}

LatticePoint LinearSeed::conjugate_support_point(int k) const {
    std::vector<int> n(b(), 0);
    n[k] = 1;
    std::vector<int> j = sites_[k];
    for (auto& v : j) v = -v;
    return LatticePoint(std::move(n), std::move(j));
}

std::vector<LatticePoint> LinearSeed::resonant_set() const {
    std::vector<LatticePoint> out;
    for (int k = 0; k < b(); ++k) out.push_back(support_point(k));
    for (int k = 0; k < b(); ++k) out.push_back(conjugate_support_point(k));
    return out;
}

bool LinearSeed::in_resonant_set(const LatticePoint& pt) const {
    for (int k = 0; k < b(); ++k)
        if (pt == support_point(k) || pt == conjugate_support_point(k)) return true;
    return false;
}

SpectralCoeffs LinearSeed::u0_series(bool unit_amplitudes) const {
    SpectralCoeffs out(b(), d_);
    for (int k = 0; k < b(); ++k)
        out.set(support_point(k), Complex(unit_amplitudes ? 1.0 : amplitudes_[k], 0.0));
    return out;
}

SpectralCoeffs LinearSeed::u0_plus_conj_series(bool unit_amplitudes) const {
    SpectralCoeffs u0 = u0_series(unit_amplitudes);
    SpectralCoeffs out = u0;
    out += u0.mirror_conjugate();
    out.set_real_representing(true);
    return out;
}

SpectralCoeffs LinearSeed::v0_series() const {
    SpectralCoeffs out = u0_plus_conj_series();
    out *= 0.5;
    return out;
}

RadicalNumber LinearSeed::n_dot_omega0(const std::vector<int>& n) const {
    if (static_cast<int>(n.size()) != b()) throw std::invalid_argument("n dimension must equal b");
    RadicalNumber out;
    for (int k = 0; k < b(); ++k) {
        if (n[k] == 0) continue;
        out += omega0_[k] * RadicalNumber(static_cast<long>(n[k]));
    }
    return out;
}

void validate_h_terms(const HTerms& terms, const LinearSeed& seed) {
    for (const auto& t : terms) {
        if (t.m < 2) throw std::invalid_argument("H term: power offset m must be >= 2");
        if (t.alpha.b() != seed.b() || t.alpha.d() != seed.d())
            throw std::invalid_argument("H term: coefficient series dims must match the seed");
        for (const auto& [pt, v] : t.alpha.entries())
            if (pt.norm1_n() != 0)
                throw std::invalid_argument("H term: alpha_m must be spatial (all time indices zero)");
        if (t.alpha.conjugate_symmetry_defect() > 1e-12)
            throw std::invalid_argument("H term: alpha_m must represent a real function");
    }
}

}  // namespace hyperwave
