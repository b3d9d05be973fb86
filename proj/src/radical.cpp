#include "hyperwave/radical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hyperwave {

namespace {

// Splits m = g^2 * r with r square-free by trial division.
void squarefree_split(std::int64_t m, std::int64_t& g, std::int64_t& r) {
    g = 1;
    r = 1;
    for (std::int64_t f = 2; f * f <= m; ++f) {
        if (m % f) continue;
        int e = 0;
        while (m % f == 0) {
            m /= f;
            ++e;
        }
        for (int i = 0; i + 1 < e; i += 2) g *= f;
        if (e & 1) r *= f;
    }
    r *= m;  // leftover prime
}

std::int64_t smallest_prime_factor(std::int64_t r) {
    for (std::int64_t f = 2; f * f <= r; ++f)
        if (r % f == 0) return f;
    return r;
}

}  // namespace

RadicalNumber::RadicalNumber(long v) {
    if (v != 0) terms_[1] = Rational(v);
}

RadicalNumber::RadicalNumber(const Rational& v) {
    if (v != 0) terms_[1] = v;
}

RadicalNumber RadicalNumber::sqrt_int(std::int64_t m) {
    if (m < 1) throw std::invalid_argument("sqrt_int: radicand must be a positive integer");
    std::int64_t g, r;
    squarefree_split(m, g, r);
    RadicalNumber out;
    out.terms_[r] = Rational(static_cast<long>(g));
    return out;
}

bool RadicalNumber::is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

Rational RadicalNumber::rational_part() const {
    auto it = terms_.find(1);
    return it == terms_.end() ? Rational(0) : it->second;
}

void RadicalNumber::insert_term(std::int64_t radicand, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, fresh] = terms_.emplace(radicand, coeff);
    if (!fresh) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

RadicalNumber RadicalNumber::operator-() const {
    RadicalNumber out(*this);
    for (auto& [r, q] : out.terms_) q = -q;
    return out;
}

RadicalNumber& RadicalNumber::operator+=(const RadicalNumber& o) {
    for (const auto& [r, q] : o.terms_) insert_term(r, q);
    return *this;
}

RadicalNumber& RadicalNumber::operator-=(const RadicalNumber& o) {
    for (const auto& [r, q] : o.terms_) insert_term(r, -q);
    return *this;
}

RadicalNumber& RadicalNumber::operator*=(const RadicalNumber& o) {
    RadicalNumber out;
    for (const auto& [r, q] : terms_) {
        for (const auto& [s, p] : o.terms_) {
            // sqrt(r)*sqrt(s) = g*sqrt(rs/g^2) with g = gcd(r, s); r, s
            // square-free makes rs/g^2 square-free with no factoring needed.
            std::int64_t g = std::gcd(r, s);
            std::int64_t a = r / g, b = s / g;
            if (a != 0 && b > (std::numeric_limits<std::int64_t>::max)() / a)
                throw ExactArithmeticCapacityError("radicand product exceeds int64 range");
            Rational c = q * p * Rational(static_cast<long>(g));
            out.insert_term(a * b, c);
        }
    }
    terms_ = std::move(out.terms_);
    return *this;
}

RadicalNumber& RadicalNumber::operator/=(const RadicalNumber& o) {
    if (o.is_zero()) throw std::invalid_argument("radical division by zero");
    RadicalNumber num(*this), den(o);
    while (!den.is_rational()) {
        std::int64_t p = 0;
        for (const auto& [r, q] : den.terms_)
            if (r > 1) {
                p = smallest_prime_factor(r);
                break;
            }
        // Conjugate w.r.t. sqrt(p): flip the sign of every term whose
        // radicand is divisible by p.  den * conj is then free of p.
        RadicalNumber conj;
        for (const auto& [r, q] : den.terms_) conj.insert_term(r, (r % p == 0) ? -q : q);
        num *= conj;
        den *= conj;
    }
    Rational d = den.rational_part();
    for (auto& [r, q] : num.terms_) q /= d;
    terms_ = std::move(num.terms_);
    return *this;
}

void RadicalNumber::to_mpfr(mpfr_t out, mpfr_prec_t prec) const {
    mpfr_set_zero(out, 1);
    mpfr_t term;
    mpfr_init2(term, prec);
    for (const auto& [r, q] : terms_) {
        mpfr_sqrt_ui(term, static_cast<unsigned long>(r), MPFR_RNDN);
        mpfr_mul_q(term, term, q.get_mpq_t(), MPFR_RNDN);
        mpfr_add(out, out, term, MPFR_RNDN);
    }
    mpfr_clear(term);
}

double RadicalNumber::to_double() const {
    if (terms_.empty()) return 0.0;
    mpfr_t acc;
    mpfr_init2(acc, 256);
    to_mpfr(acc, 256);
    double v = mpfr_get_d(acc, MPFR_RNDN);
    mpfr_clear(acc);
    return v;
}

int RadicalNumber::sign() const {
    if (terms_.empty()) return 0;
    if (is_rational()) return sgn(terms_.begin()->second);
    const auto k = static_cast<long>(terms_.size());
    for (mpfr_prec_t prec = 128; prec <= (1 << 14); prec *= 2) {
        mpfr_t val, mag, bound;
        mpfr_inits2(prec, val, mag, bound, static_cast<mpfr_ptr>(nullptr));
        to_mpfr(val, prec);
        mpfr_set_zero(mag, 1);
        mpfr_t term;
        mpfr_init2(term, prec);
        for (const auto& [r, q] : terms_) {
            mpfr_sqrt_ui(term, static_cast<unsigned long>(r), MPFR_RNDN);
            mpfr_mul_q(term, term, q.get_mpq_t(), MPFR_RNDN);
            mpfr_abs(term, term, MPFR_RNDN);
            mpfr_add(mag, mag, term, MPFR_RNDN);
        }
        mpfr_clear(term);
        // Accumulated rounding is below mag * 8k * 2^-prec.
        mpfr_mul_si(bound, mag, 8 * k, MPFR_RNDN);
        mpfr_mul_2si(bound, bound, -static_cast<long>(prec), MPFR_RNDN);
        int result = 0;
        if (mpfr_cmpabs(val, bound) > 0) result = mpfr_sgn(val);
        mpfr_clears(val, mag, bound, static_cast<mpfr_ptr>(nullptr));
        if (result != 0) return result;
    }
    throw std::logic_error("sign refinement failed on a structurally nonzero value");
}

std::string RadicalNumber::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [r, q] : terms_) {
        Rational a = q;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        if (r == 1) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str() << "*";
            os << "sqrt(" << r << ")";
        }
        first = false;
    }
    return os.str();
}

RadicalNumber radical_determinant(std::vector<std::vector<RadicalNumber>> m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("radical_determinant: matrix not square");
    if (n == 0) return RadicalNumber(1);

    int sign = 1;
    RadicalNumber prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t r = k + 1;
            while (r < n && m[r][k].is_zero()) ++r;
            if (r == n) return RadicalNumber(0);
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            m[i][k] = RadicalNumber(0);
        }
        prev = m[k][k];
    }
    RadicalNumber det = m[n - 1][n - 1];
    if (sign < 0) det = -det;
    return det;
}

}  // namespace hyperwave
