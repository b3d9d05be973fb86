#include "hyperwave/radical.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace hyperwave;

namespace {

const std::vector<long> kRadicands = {1, 2, 3, 5, 6, 7, 10, 13, 17, 26, 37, 50};

RadicalNumber random_radical(std::mt19937_64& rng, int max_terms = 4) {
    RadicalNumber x;
    int terms = 1 + static_cast<int>(oracle::uniform01(rng) * max_terms);
    for (int t = 0; t < terms; ++t) {
        long r = kRadicands[static_cast<std::size_t>(oracle::uniform01(rng) * kRadicands.size())];
        long num = static_cast<long>(oracle::uniform01(rng) * 21) - 10;
        long den = 1 + static_cast<long>(oracle::uniform01(rng) * 10);
        x += RadicalNumber(Rational(num, den)) * RadicalNumber::sqrt_int(r);
    }
    return x;
}

}  // namespace

TEST_CASE("square roots canonicalize") {
    CHECK(RadicalNumber::sqrt_int(2).str() == "sqrt(2)");
    CHECK(RadicalNumber::sqrt_int(50).str() == "5*sqrt(2)");
    CHECK(RadicalNumber::sqrt_int(1).str() == "1");
    CHECK(RadicalNumber::sqrt_int(1).is_rational());
    CHECK((RadicalNumber::sqrt_int(50) - RadicalNumber(5L) * RadicalNumber::sqrt_int(2)).is_zero());
    CHECK_THROWS_AS(RadicalNumber::sqrt_int(0), std::invalid_argument);
}

TEST_CASE("products renormalize") {
    RadicalNumber s2 = RadicalNumber::sqrt_int(2), s3 = RadicalNumber::sqrt_int(3);
    CHECK((s2 * s2 - RadicalNumber(2L)).is_zero());
    CHECK((s2 * s3 - RadicalNumber::sqrt_int(6)).is_zero());
    RadicalNumber one(1L);
    CHECK(((one + s2) * (one - s2) - RadicalNumber(-1L)).is_zero());
}

TEST_CASE("zero test is structural") {
    RadicalNumber s2 = RadicalNumber::sqrt_int(2), s3 = RadicalNumber::sqrt_int(3);
    CHECK((s2 + s3 - s2 - s3).is_zero());
    // An accurate rational approximation of sqrt(2) is still not sqrt(2).
    CHECK_FALSE((s2 - RadicalNumber(Rational(14142, 10000))).is_zero());
    CHECK(RadicalNumber().is_zero());
}

TEST_CASE("double conversion under cancellation") {
    CHECK(RadicalNumber::sqrt_int(2).to_double() == doctest::Approx(1.4142135623730951).epsilon(1e-14));
    CHECK(RadicalNumber().to_double() == 0.0);
    CHECK((RadicalNumber(5L) * RadicalNumber::sqrt_int(2)).to_double() ==
          doctest::Approx(7.0710678118654755).epsilon(1e-13));
    // Heavy cancellation: (sqrt(2)+1)(sqrt(2)-1) - 1 evaluates exactly to 0.
    RadicalNumber one(1L), s2 = RadicalNumber::sqrt_int(2);
    CHECK(((s2 + one) * (s2 - one) - one).to_double() == 0.0);
}

TEST_CASE("sign is exact") {
    RadicalNumber s2 = RadicalNumber::sqrt_int(2);
    CHECK(s2.sign() == 1);
    CHECK((-s2).sign() == -1);
    CHECK(RadicalNumber().sign() == 0);
    // 3*sqrt(2) - sqrt(17) is small but positive.
    CHECK((RadicalNumber(3L) * s2 - RadicalNumber::sqrt_int(17)).sign() == 1);
    // sqrt(10) - sqrt(2) - sqrt(3): 3.1623 - 1.4142 - 1.7321 = 0.016 > 0.
    CHECK((RadicalNumber::sqrt_int(10) - s2 - RadicalNumber::sqrt_int(3)).sign() == 1);
}

TEST_CASE("division rationalizes exactly") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        RadicalNumber a = random_radical(rng), b = random_radical(rng);
        if (b.is_zero()) continue;
        RadicalNumber q = a / b;
        CHECK((q * b - a).is_zero());
    }
    CHECK_THROWS_AS(RadicalNumber(1L) / RadicalNumber(), std::invalid_argument);
}

TEST_CASE("field axioms on random instances") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        RadicalNumber a = random_radical(rng), b = random_radical(rng), c = random_radical(rng);
        CHECK(((a + b) + c - (a + (b + c))).is_zero());
        CHECK((a * (b + c) - (a * b + a * c)).is_zero());
        CHECK(((a * b) * c - (a * (b * c))).is_zero());
        CHECK((a + (-a)).is_zero());
        CHECK((a * b - b * a).is_zero());
    }
}

TEST_CASE("zero test agrees with the 200-bit oracle") {
    std::mt19937_64 rng(2024);
    long disagreements = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        RadicalNumber x = random_radical(rng);
        RadicalNumber y = random_radical(rng);
        std::vector<RadicalNumber> cases = {x + y - y - x, x * y - y * x, x - y,
                                            RadicalNumber::sqrt_int(50) -
                                                RadicalNumber(5L) * RadicalNumber::sqrt_int(2)};
        for (const auto& z : cases) {
            std::vector<std::pair<long, Rational>> terms(z.terms().begin(), z.terms().end());
            bool oracle_zero = std::abs(oracle::eval_radical_mpfr(terms)) < 1e-9;
            if (z.is_zero() != oracle_zero) ++disagreements;
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("fraction-free determinants match cofactor expansion") {
    std::mt19937_64 rng(5);
    auto cofactor_det = [](auto&& self, const std::vector<std::vector<RadicalNumber>>& m) {
        const std::size_t n = m.size();
        if (n == 1) return m[0][0];
        RadicalNumber acc;
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<std::vector<RadicalNumber>> sub;
            for (std::size_t r = 1; r < n; ++r) {
                std::vector<RadicalNumber> row;
                for (std::size_t cc = 0; cc < n; ++cc)
                    if (cc != c) row.push_back(m[r][cc]);
                sub.push_back(std::move(row));
            }
            RadicalNumber term = m[0][c] * self(self, sub);
            acc += (c % 2 == 0) ? term : -term;
        }
        return acc;
    };
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 2 + trial % 3;
        std::vector<std::vector<RadicalNumber>> m(n, std::vector<RadicalNumber>(n));
        for (auto& row : m)
            for (auto& x : row) x = random_radical(rng, 2);
        CHECK((radical_determinant(m) - cofactor_det(cofactor_det, m)).is_zero());
    }
    // Singular and permuted-pivot cases.
    RadicalNumber s2 = RadicalNumber::sqrt_int(2);
    CHECK(radical_determinant({{s2, s2}, {s2, s2}}).is_zero());
    CHECK((radical_determinant({{RadicalNumber(), s2}, {s2, RadicalNumber()}}) +
           RadicalNumber(2L)).is_zero());
}

TEST_CASE("textual rendering") {
    RadicalNumber x = RadicalNumber(Rational(-1)) + RadicalNumber(2L) * RadicalNumber::sqrt_int(2) -
                      RadicalNumber(Rational(1, 3)) * RadicalNumber::sqrt_int(6);
    CHECK(x.str() == "-1 + 2*sqrt(2) - 1/3*sqrt(6)");
    CHECK(RadicalNumber().str() == "0");
}
