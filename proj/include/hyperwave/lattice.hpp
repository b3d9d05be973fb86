#ifndef HYPERWAVE_LATTICE_HPP
#define HYPERWAVE_LATTICE_HPP

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace hyperwave {

using Complex = std::complex<double>;

/// A space-time Fourier mode index: n indexes the b time harmonics, j the d
/// spatial modes.
struct LatticePoint {
    std::vector<int> n;
    std::vector<int> j;

    LatticePoint() = default;
    LatticePoint(std::vector<int> n_, std::vector<int> j_) : n(std::move(n_)), j(std::move(j_)) {}

    int norm1_n() const;
    int norm1_j() const;
    long norm2sq_j() const;

    LatticePoint operator+(const LatticePoint& o) const;
    LatticePoint operator-(const LatticePoint& o) const;
    LatticePoint operator-() const;
    bool operator==(const LatticePoint& o) const { return n == o.n && j == o.j; }
    bool operator<(const LatticePoint& o) const { return n != o.n ? n < o.n : j < o.j; }

    std::string str() const;
};

/// Weight for the exponentially weighted l1 norm sum |c| * exp(rho*(|n|_1+|j|_1)).
struct AnalyticNorm {
    double rho = 0.5;
    explicit AnalyticNorm(double rho_ = 0.5) : rho(rho_) {
        if (rho <= 0) throw std::invalid_argument("AnalyticNorm: rho must be positive");
    }
};

/// Sparse space-time Fourier series on Z^{b+d}.  Entries with modulus below
/// 1e-300 are dropped so the sparse form stays canonical.  The
/// real_representing tag marks series with entry(-n,-j) = conj(entry(n,j));
/// it is propagated, not enforced.
class SpectralCoeffs {
  public:
    SpectralCoeffs() = default;
    SpectralCoeffs(int b, int d, bool real_representing = false)
        : b_(b), d_(d), real_representing_(real_representing) {
        if (b < 1 || d < 1) throw std::invalid_argument("SpectralCoeffs: dims must be >= 1");
    }

    int b() const { return b_; }
    int d() const { return d_; }
    bool dims_match(const SpectralCoeffs& o) const { return b_ == o.b_ && d_ == o.d_; }

    bool tagged_real_representing() const { return real_representing_; }
    void set_real_representing(bool v) { real_representing_ = v; }
    /// Largest deviation |entry(-n,-j) - conj(entry(n,j))| over the support.
    double conjugate_symmetry_defect() const;

    const std::map<LatticePoint, Complex>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    Complex at(const LatticePoint& p) const;
    void set(const LatticePoint& p, Complex v);
    void add(const LatticePoint& p, Complex v);
    void check_point(const LatticePoint& p) const;

    SpectralCoeffs& operator+=(const SpectralCoeffs& o);
    SpectralCoeffs& operator-=(const SpectralCoeffs& o);
    SpectralCoeffs& operator*=(double s);
    friend SpectralCoeffs operator+(SpectralCoeffs a, const SpectralCoeffs& b) { return a += b; }
    friend SpectralCoeffs operator-(SpectralCoeffs a, const SpectralCoeffs& b) { return a -= b; }
    friend SpectralCoeffs operator*(SpectralCoeffs a, double s) { return a *= s; }

    /// Series with entries conj(entry(-n,-j)); represents the complex
    /// conjugate of the underlying function.
    SpectralCoeffs mirror_conjugate() const;

    nlohmann::ordered_json to_json() const;
    static SpectralCoeffs from_json(const nlohmann::json& j);

    static constexpr double kDropThreshold = 1e-300;

  private:
    int b_ = 1, d_ = 1;
    bool real_representing_ = false;
    std::map<LatticePoint, Complex> entries_;
};

/// Fourier-space product: support(result) is contained in support(f)+support(g).
SpectralCoeffs convolve(const SpectralCoeffs& f, const SpectralCoeffs& g);

/// m-fold convolution power, m >= 1.
SpectralCoeffs convolution_power(const SpectralCoeffs& f, int m);

/// Sum of |entry| * exp(rho * (|n|_1 + |j|_1)); zero iff the series is empty.
double weighted_norm(const SpectralCoeffs& f, const AnalyticNorm& nrm = AnalyticNorm());

}  // namespace hyperwave

#endif
