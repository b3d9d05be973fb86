#include "hyperwave/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace hyperwave {

int LatticePoint::norm1_n() const {
    int s = 0;
    for (int v : n) s += std::abs(v);
    return s;
}

int LatticePoint::norm1_j() const {
    int s = 0;
    for (int v : j) s += std::abs(v);
    return s;
}

long LatticePoint::norm2sq_j() const {
    long s = 0;
    for (int v : j) s += static_cast<long>(v) * v;
    return s;
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
    LatticePoint out(*this);
    for (std::size_t i = 0; i < n.size(); ++i) out.n[i] += o.n[i];
    for (std::size_t i = 0; i < j.size(); ++i) out.j[i] += o.j[i];
    return out;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
    LatticePoint out(*this);
    for (std::size_t i = 0; i < n.size(); ++i) out.n[i] -= o.n[i];
    for (std::size_t i = 0; i < j.size(); ++i) out.j[i] -= o.j[i];
    return out;
}

LatticePoint LatticePoint::operator-() const {
    LatticePoint out(*this);
    for (auto& v : out.n) v = -v;
    for (auto& v : out.j) v = -v;
    return out;
}

std::string LatticePoint::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
    os << ";";
    for (std::size_t i = 0; i < j.size(); ++i) os << (i ? "," : "") << j[i];
    os << ")";
    return os.str();
}

void SpectralCoeffs::check_point(const LatticePoint& p) const {
    if (static_cast<int>(p.n.size()) != b_ || static_cast<int>(p.j.size()) != d_)
        throw std::invalid_argument("lattice point dims do not match series dims");
}

Complex SpectralCoeffs::at(const LatticePoint& p) const {
    auto it = entries_.find(p);
    return it == entries_.end() ? Complex(0, 0) : it->second;
}

void SpectralCoeffs::set(const LatticePoint& p, Complex v) {
    check_point(p);
    if (std::abs(v) < kDropThreshold)
        entries_.erase(p);
    else
        entries_[p] = v;
}

void SpectralCoeffs::add(const LatticePoint& p, Complex v) {
    check_point(p);
    auto [it, fresh] = entries_.emplace(p, v);
    if (!fresh) it->second += v;
    if (std::abs(it->second) < kDropThreshold) entries_.erase(it);
}

SpectralCoeffs& SpectralCoeffs::operator+=(const SpectralCoeffs& o) {
    if (!dims_match(o)) throw std::invalid_argument("series dims mismatch");
    for (const auto& [p, v] : o.entries_) add(p, v);
    real_representing_ = real_representing_ && o.real_representing_;
    return *this;
}

SpectralCoeffs& SpectralCoeffs::operator-=(const SpectralCoeffs& o) {
    if (!dims_match(o)) throw std::invalid_argument("series dims mismatch");
    for (const auto& [p, v] : o.entries_) add(p, -v);
    real_representing_ = real_representing_ && o.real_representing_;
    return *this;
}

SpectralCoeffs& SpectralCoeffs::operator*=(double s) {
    if (s == 0.0) {
        entries_.clear();
        return *this;
    }
    for (auto& [p, v] : entries_) v *= s;
    return *this;
}

SpectralCoeffs SpectralCoeffs::mirror_conjugate() const {
    SpectralCoeffs out(b_, d_, real_representing_);
    for (const auto& [p, v] : entries_) out.set(-p, std::conj(v));
    return out;
}

double SpectralCoeffs::conjugate_symmetry_defect() const {
    double worst = 0.0;
    for (const auto& [p, v] : entries_) worst = std::max(worst, std::abs(at(-p) - std::conj(v)));
    return worst;
}

SpectralCoeffs convolve(const SpectralCoeffs& f, const SpectralCoeffs& g) {
    if (!f.dims_match(g)) throw std::invalid_argument("convolve: series dims mismatch");
    SpectralCoeffs out(f.b(), f.d(), f.tagged_real_representing() && g.tagged_real_representing());
    // Direct sparse double loop; supports are small and structured here.
    for (const auto& [pf, vf] : f.entries())
        for (const auto& [pg, vg] : g.entries()) out.add(pf + pg, vf * vg);
    return out;
}

SpectralCoeffs convolution_power(const SpectralCoeffs& f, int m) {
    if (m < 1) throw std::invalid_argument("convolution_power: m must be >= 1");
    SpectralCoeffs out = f;
    for (int i = 1; i < m; ++i) out = convolve(out, f);
    return out;
}

double weighted_norm(const SpectralCoeffs& f, const AnalyticNorm& nrm) {
    double s = 0.0;
    for (const auto& [p, v] : f.entries()) s += std::abs(v) * std::exp(nrm.rho * (p.norm1_n() + p.norm1_j()));
    return s;
}

nlohmann::ordered_json SpectralCoeffs::to_json() const {
    nlohmann::ordered_json out;
    out["b"] = b_;
    out["d"] = d_;
    out["real_representing"] = real_representing_;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [p, v] : entries_) {  // map order is the required (n, j) lexicographic order
        nlohmann::ordered_json e;
        e["n"] = p.n;
        e["j"] = p.j;
        e["re"] = v.real();
        e["im"] = v.imag();
        arr.push_back(std::move(e));
    }
    out["entries"] = std::move(arr);
    return out;
}

SpectralCoeffs SpectralCoeffs::from_json(const nlohmann::json& j) {
    SpectralCoeffs out(j.at("b").get<int>(), j.at("d").get<int>(),
                       j.value("real_representing", false));
    for (const auto& e : j.at("entries")) {
        LatticePoint p(e.at("n").get<std::vector<int>>(), e.at("j").get<std::vector<int>>());
        out.set(p, Complex(e.at("re").get<double>(), e.at("im").get<double>()));
    }
    return out;
}

}  // namespace hyperwave
