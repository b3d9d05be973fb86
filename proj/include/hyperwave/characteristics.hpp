#ifndef HYPERWAVE_CHARACTERISTICS_HPP
#define HYPERWAVE_CHARACTERISTICS_HPP

#include <set>
#include <vector>

#include "hyperwave/genericity.hpp"
#include "hyperwave/lattice.hpp"
#include "hyperwave/seed.hpp"

namespace hyperwave {

/// Truncation radii: ||n||_1 <= n_radius, ||j||_inf <= j_radius.
struct LatticeBox {
    int n_radius = 1;
    int j_radius = 1;
};

/// The resonant lattice points inside a box, split by sheet: the plus sheet
/// carries n.omega0 < 0 (so n.omega0 + sqrt(j^2+1) = 0), the minus sheet its
/// time mirror.  Membership is decided exactly.
struct CharacteristicSet {
    int b = 1, d = 1;
    LatticeBox box;
    std::set<LatticePoint> plus, minus;

    std::size_t size() const { return plus.size() + minus.size(); }
    bool on_plus(const LatticePoint& p) const { return plus.count(p) != 0; }
    bool on_minus(const LatticePoint& p) const { return minus.count(p) != 0; }
};

CharacteristicSet enumerate_characteristics(const LinearSeed& seed, const LatticeBox& box);

enum class AdjacencyMode { GammaStep, AlgebraStep };

struct ComponentReport {
    std::vector<std::vector<LatticePoint>> components;  // each sorted; list sorted by first point
    int max_size = 0;
    int bound = 0;  // B for the seed dims
    AdjacencyMode mode = AdjacencyMode::GammaStep;
};

/// Graph components of the characteristic points where two points are
/// adjacent iff their difference lies in the given step set minus the origin.
ComponentReport connected_components(const CharacteristicSet& cs, const DifferenceSet& steps,
                                     AdjacencyMode mode);

/// True iff max component size <= B; otherwise *counterexample (when given)
/// receives the offending component.
bool verify_prop2_bound(const ComponentReport& report,
                        std::vector<LatticePoint>* counterexample = nullptr);

/// Small-divisor profile: m(N) = min over ||n||_1 <= N and j in the box,
/// excluding exact zeros, of | |n.omega0| - sqrt(j^2+1) |, with a log-log
/// least-squares fit m(N) ~ cprime * N^{-q}.
struct DiophantineProfile {
    std::vector<std::pair<int, double>> table;  // (N, m(N))
    double cprime = 0;
    double q = 0;
};

DiophantineProfile diophantine_profile(const LinearSeed& seed, const LatticeBox& box);

nlohmann::ordered_json charset_to_json(const CharacteristicSet& cs,
                                       const std::vector<ComponentReport>& reports,
                                       const DiophantineProfile& profile);

}  // namespace hyperwave

#endif
