#ifndef HYPERWAVE_GENERICITY_HPP
#define HYPERWAVE_GENERICITY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperwave/lattice.hpp"
#include "hyperwave/radical.hpp"
#include "hyperwave/seed.hpp"

namespace hyperwave {

/// Combinatorial bound B = (d+1)(d+2)/2 + b(b+1); component sizes on the
/// characteristics stay below it for generic seeds.
int bound_B(int b, int d);
/// B' = (d+1)(d+2)/2, the subset size of the rank condition.
int bound_Bprime(int d);

/// A set of lattice differences (Delta n, Delta j).  For the step-algebra
/// kind the value stores the minimal number of nonzero steps realizing the
/// element.
struct DifferenceSet {
    enum class Kind { Gamma, AlgebraA, ExceptionalG };
    Kind kind = Kind::Gamma;
    int b = 1, d = 1;
    std::map<LatticePoint, int> elems;
    bool truncated = false;  // capacity cap hit; the set is a labeled partial set

    bool contains(const LatticePoint& p) const { return elems.count(p) != 0; }
    std::size_t size() const { return elems.size(); }
};

/// Support of (u0 + conj u0)^{*p} as a difference set.
DifferenceSet build_gamma(const LinearSeed& seed);

/// All sums of at most B elements of gamma (identity padding allowed),
/// annotated with minimal length.
DifferenceSet build_algebra(const DifferenceSet& gamma, int B, std::size_t cap = 1000000);

/// The two one-parameter exceptional families with 0 < |alpha| <= bound,
/// both index orders.
DifferenceSet build_exceptional_G(const LinearSeed& seed, int bound);

/// Membership in the (infinite) exceptional families, decided by pattern
/// matching with alpha solved exactly.
bool in_exceptional_G(const LinearSeed& seed, const LatticePoint& elem);

/// The linear-system data attached to a difference element: L has the d
/// quadratic coefficients a_m, the d(d-1)/2 cross terms b_mm', and the d
/// linear coefficients c_m; W is the inhomogeneous part.
struct LWValues {
    std::vector<RadicalNumber> L;
    RadicalNumber W;
    RadicalNumber sigma_plus;   // Dj^2 + (Dn.omega0)^2
    RadicalNumber sigma_minus;  // Dj^2 - (Dn.omega0)^2
};
LWValues lw_functions(const LatticePoint& elem, const LinearSeed& seed);

struct Witness {
    LatticePoint elem;
    std::string quantity;  // which exact value vanished / which point violated
    std::string value;     // exact textual radical rendering
    std::vector<LatticePoint> context;
};

struct ConditionVerdict {
    enum class Status { Holds, Fails, PartiallyVerified };
    Status status = Status::Holds;
    long tested = 0;
    double total = -1;  // -1 when not enumerable cheaply
    std::vector<Witness> witnesses;

    bool holds() const { return status == Status::Holds; }
    std::string status_str() const;
};

struct SampledMode {
    long count = 500;
    std::uint64_t rng_seed = 1;
};

ConditionVerdict check_condition_i(const LinearSeed& seed, const DifferenceSet& algebra);

/// Rank condition over B'-subsets of eligible elements (in the algebra,
/// spatial part nonzero, outside the exceptional families).  Exhaustive up
/// to `budget` subsets, after which the verdict downgrades to
/// partially-verified; or deterministic sampling.
ConditionVerdict check_condition_ii(const LinearSeed& seed, const DifferenceSet& algebra,
                                    std::optional<SampledMode> sampled = std::nullopt,
                                    long budget = 1000000);

/// The (p+1)-power support must avoid the characteristics away from the
/// resonant set.  The support is finite and computed exactly.
ConditionVerdict check_condition_iii(const LinearSeed& seed);

struct GenericityCertificate {
    int b, d, p, B, Bprime;
    std::vector<std::vector<int>> sites;
    ConditionVerdict cond_i, cond_ii, cond_iii;
    std::size_t gamma_size = 0, algebra_size = 0;
    bool algebra_truncated = false;

    bool holds() const { return cond_i.holds() && cond_ii.holds() && cond_iii.holds(); }
    bool refuted() const;
    nlohmann::ordered_json to_json() const;
};

struct CertifyOptions {
    std::optional<SampledMode> sampled;  // empty = exhaustive with budget
    long budget = 1000000;
    std::size_t algebra_cap = 1000000;
};

GenericityCertificate certify(const LinearSeed& seed, const CertifyOptions& opt = {});

/// Monte Carlo estimate of the non-generic fraction for real site tuples
/// sampled uniformly from [-box_halfwidth, box_halfwidth]^{d*b}; the
/// genericity functions are evaluated in floating point against the given
/// threshold.
struct MeasureEstimate {
    long samples = 0;
    long violations = 0;
    double fraction() const { return samples ? static_cast<double>(violations) / samples : 0.0; }
};
MeasureEstimate nongeneric_measure_estimate(int d, int b, int p, long samples,
                                            std::uint64_t rng_seed, double box_halfwidth = 6.0,
                                            double threshold = 1e-9, long ii_subset_cap = 200);

}  // namespace hyperwave

#endif
