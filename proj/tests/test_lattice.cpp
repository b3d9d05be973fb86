#include "hyperwave/lattice.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace hyperwave;

namespace {

LatticePoint pt(int n, int j) { return LatticePoint({n}, {j}); }

SpectralCoeffs random_sparse(std::mt19937_64& rng, int entries, bool symmetric = false) {
    SpectralCoeffs f(1, 1, symmetric);
    for (int e = 0; e < entries; ++e) {
        int n = static_cast<int>(oracle::uniform01(rng) * 9) - 4;
        int j = static_cast<int>(oracle::uniform01(rng) * 9) - 4;
        Complex v(2 * oracle::uniform01(rng) - 1, 2 * oracle::uniform01(rng) - 1);
        f.add(pt(n, j), v);
        if (symmetric) f.add(pt(-n, -j), std::conj(v));
    }
    return f;
}

}  // namespace

TEST_CASE("single-mode product") {
    SpectralCoeffs f(1, 1), g(1, 1);
    double a = 0.3;
    f.set(pt(-1, 1), a);
    g.set(pt(1, -1), a);
    SpectralCoeffs h = convolve(f, g);
    CHECK(h.size() == 1);
    CHECK(h.at(pt(0, 0)).real() == doctest::Approx(a * a).epsilon(1e-15));
}

TEST_CASE("square of the two-point series") {
    SpectralCoeffs f(1, 1);
    f.set(pt(-1, 1), 1.0);
    f.set(pt(1, -1), 1.0);
    SpectralCoeffs h = convolve(f, f);
    CHECK(h.size() == 3);
    CHECK(h.at(pt(-2, 2)).real() == doctest::Approx(1.0));
    CHECK(h.at(pt(0, 0)).real() == doctest::Approx(2.0));
    CHECK(h.at(pt(2, -2)).real() == doctest::Approx(1.0));
}

TEST_CASE("identity element") {
    std::mt19937_64 rng(3);
    SpectralCoeffs f = random_sparse(rng, 6);
    SpectralCoeffs id(1, 1);
    id.set(pt(0, 0), 1.0);
    SpectralCoeffs h = convolve(f, id);
    for (const auto& [p, v] : f.entries()) CHECK(std::abs(h.at(p) - v) < 1e-15);
    CHECK(h.size() == f.size());
}

TEST_CASE("dimension mismatch is rejected") {
    SpectralCoeffs f(1, 1), g(2, 1);
    CHECK_THROWS_AS(convolve(f, g), std::invalid_argument);
}

TEST_CASE("cube coefficient counts arrangements") {
    double a = 0.25;
    SpectralCoeffs f(1, 1);
    f.set(pt(-1, 1), a);
    f.set(pt(1, -1), a);
    SpectralCoeffs h = convolution_power(f, 3);
    CHECK(h.at(pt(-1, 1)).real() == doctest::Approx(3 * a * a * a).epsilon(1e-14));
    CHECK(h.at(pt(-3, 3)).real() == doctest::Approx(a * a * a).epsilon(1e-14));
    CHECK(convolution_power(f, 1).entries() == f.entries());
    CHECK_THROWS_AS(convolution_power(f, 0), std::invalid_argument);
}

TEST_CASE("real-representing tag propagates and holds") {
    std::mt19937_64 rng(17);
    SpectralCoeffs f = random_sparse(rng, 5, true);
    CHECK(f.conjugate_symmetry_defect() == 0.0);
    SpectralCoeffs h = convolution_power(f, 3);
    CHECK(h.tagged_real_representing());
    CHECK(h.conjugate_symmetry_defect() < 1e-14);
    SpectralCoeffs g = random_sparse(rng, 5, false);
    CHECK_FALSE(convolve(f, g).tagged_real_representing());
}

TEST_CASE("weighted norm values") {
    SpectralCoeffs empty(1, 1);
    CHECK(weighted_norm(empty) == 0.0);
    SpectralCoeffs single(1, 1);
    single.set(pt(0, 0), 2.0);
    CHECK(weighted_norm(single, AnalyticNorm(0.7)) == doctest::Approx(2.0));
    SpectralCoeffs two(1, 1);
    two.set(pt(-1, 1), 1.0);
    two.set(pt(1, -1), 1.0);
    CHECK(weighted_norm(two, AnalyticNorm(0.5)) == doctest::Approx(2 * std::exp(1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(AnalyticNorm(0.0), std::invalid_argument);
}

TEST_CASE("submultiplicativity of the weighted norm") {
    std::mt19937_64 rng(23);
    AnalyticNorm nrm(0.5);
    for (int trial = 0; trial < 200; ++trial) {
        SpectralCoeffs f = random_sparse(rng, 1 + trial % 7);
        SpectralCoeffs g = random_sparse(rng, 1 + (trial / 2) % 7);
        double lhs = weighted_norm(convolve(f, g), nrm);
        double rhs = weighted_norm(f, nrm) * weighted_norm(g, nrm);
        CHECK(lhs <= rhs * (1 + 1e-12));
    }
}

TEST_CASE("convolution algebra identities") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        SpectralCoeffs f = random_sparse(rng, 4), g = random_sparse(rng, 4),
                       h = random_sparse(rng, 3);
        SpectralCoeffs fg = convolve(f, g), gf = convolve(g, f);
        for (const auto& [p, v] : fg.entries()) CHECK(std::abs(gf.at(p) - v) <= 1e-12);
        SpectralCoeffs lhs = convolve(convolve(f, g), h), rhs = convolve(f, convolve(g, h));
        for (const auto& [p, v] : lhs.entries()) CHECK(std::abs(rhs.at(p) - v) <= 1e-12);
    }
}

TEST_CASE("power splits multiplicatively") {
    std::mt19937_64 rng(31);
    SpectralCoeffs f = random_sparse(rng, 5);
    SpectralCoeffs whole = convolution_power(f, 5);
    SpectralCoeffs split = convolve(convolution_power(f, 2), convolution_power(f, 3));
    for (const auto& [p, v] : whole.entries()) {
        double scale = std::max(1.0, std::abs(v));
        CHECK(std::abs(split.at(p) - v) <= 1e-12 * scale);
    }
}

TEST_CASE("json round-trip is byte-stable and sorted") {
    std::mt19937_64 rng(37);
    SpectralCoeffs f = random_sparse(rng, 8, true);
    auto j1 = f.to_json();
    SpectralCoeffs g = SpectralCoeffs::from_json(j1);
    auto j2 = g.to_json();
    CHECK(j1.dump() == j2.dump());
    // Entries appear in lexicographic (n, j) order.
    std::vector<LatticePoint> order;
    for (const auto& e : j1["entries"])
        order.emplace_back(e["n"].get<std::vector<int>>(), e["j"].get<std::vector<int>>());
    CHECK(std::is_sorted(order.begin(), order.end()));
}
