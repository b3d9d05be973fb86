#ifndef HYPERWAVE_RADICAL_HPP
#define HYPERWAVE_RADICAL_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperwave {

using Rational = mpq_class;

/// Raised when an integer radicand product would leave the (generous)
/// int64 range the canonicalizer works in.
struct ExactArithmeticCapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact element of the real field generated over the rationals by square
/// roots of positive integers.  Stored as radicand -> coefficient with all
/// radicands square-free; radicand 1 holds the rational part.  The value is
/// zero iff the map is empty, which makes the zero test sound (square roots
/// of distinct square-free integers are linearly independent over Q).
class RadicalNumber {
  public:
    RadicalNumber() = default;
    RadicalNumber(long v);                  // NOLINT(google-explicit-constructor)
    RadicalNumber(const Rational& v);       // NOLINT(google-explicit-constructor)

    /// sqrt(m) for a positive integer m, canonicalized: m = g^2 * r with r
    /// square-free gives coefficient g on radicand r.
    static RadicalNumber sqrt_int(std::int64_t m);

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const;
    /// Rational part (coefficient of radicand 1).
    Rational rational_part() const;
    const std::map<std::int64_t, Rational>& terms() const { return terms_; }

    RadicalNumber operator-() const;
    RadicalNumber& operator+=(const RadicalNumber& o);
    RadicalNumber& operator-=(const RadicalNumber& o);
    RadicalNumber& operator*=(const RadicalNumber& o);
    /// Exact division by rationalizing the denominator one prime at a time.
    RadicalNumber& operator/=(const RadicalNumber& o);

    friend RadicalNumber operator+(RadicalNumber a, const RadicalNumber& b) { return a += b; }
    friend RadicalNumber operator-(RadicalNumber a, const RadicalNumber& b) { return a -= b; }
    friend RadicalNumber operator*(RadicalNumber a, const RadicalNumber& b) { return a *= b; }
    friend RadicalNumber operator/(RadicalNumber a, const RadicalNumber& b) { return a /= b; }
    bool operator==(const RadicalNumber& o) const { return terms_ == o.terms_; }
    bool operator!=(const RadicalNumber& o) const { return !(*this == o); }

    /// Double evaluation through 256-bit intermediate arithmetic, so the
    /// result is correct to ~1 ulp even under heavy cancellation.
    double to_double() const;
    /// Round-to-nearest evaluation at the given precision.
    void to_mpfr(mpfr_t out, mpfr_prec_t prec) const;
    /// Exact sign (-1, 0, +1).  Zero is decided structurally; nonzero sign by
    /// interval refinement at increasing precision.
    int sign() const;

    RadicalNumber squared() const { return *this * *this; }

    /// "q1*sqrt(r1) + q2*sqrt(r2) + ..." with radicands ascending; the
    /// rational part prints as a bare rational.
    std::string str() const;

  private:
    std::map<std::int64_t, Rational> terms_;
    void insert_term(std::int64_t radicand, const Rational& coeff);
};

/// Determinant by fraction-free (Bareiss) elimination; divisions by previous
/// pivots are exact.  The matrix is consumed.
RadicalNumber radical_determinant(std::vector<std::vector<RadicalNumber>> m);

}  // namespace hyperwave

#endif
