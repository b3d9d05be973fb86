#include "hyperwave/genericity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

namespace hyperwave {

int bound_B(int b, int d) { return (d + 1) * (d + 2) / 2 + b * (b + 1); }
int bound_Bprime(int d) { return (d + 1) * (d + 2) / 2; }

std::string ConditionVerdict::status_str() const {
    switch (status) {
        case Status::Holds: return "holds";
        case Status::Fails: return "fails";
        default: return "partially-verified";
    }
}

namespace {

// Exponent-tuple enumeration: all (p_k, p_k') >= 0 with total p, reduced to
// the step vectors Delta n (Delta j is determined by Delta n and the sites:
// Delta j = - sum_k Delta n_k j_k).
void enumerate_dn_rec(int b, int k, int remaining, std::vector<int>& dn,
                      std::vector<std::vector<int>>& out) {
    if (k == b) {
        if (remaining % 2 == 0) out.push_back(dn);  // slack absorbed by p_k = p_k' pairs
        return;
    }
    for (int t = -remaining; t <= remaining; ++t) {
        dn[k] = -t;  // Delta n_k = -(p_k - p_k')
        enumerate_dn_rec(b, k + 1, remaining - std::abs(t), dn, out);
    }
    dn[k] = 0;
}

std::vector<std::vector<int>> gamma_dn_vectors(int b, int p) {
    std::vector<int> dn(b, 0);
    std::vector<std::vector<int>> out;
    enumerate_dn_rec(b, 0, p, dn, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <typename SiteT>
std::vector<SiteT> dj_from_dn(const std::vector<int>& dn,
                              const std::vector<std::vector<SiteT>>& sites, int d) {
    std::vector<SiteT> dj(d, SiteT(0));
    for (std::size_t k = 0; k < dn.size(); ++k)
        for (int i = 0; i < d; ++i) dj[i] -= SiteT(dn[k]) * sites[k][i];
    return dj;
}

bool next_combination(std::vector<int>& idx, int n) {
    const int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - (k - i)) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

double binomial_double(long n, int k) {
    if (k < 0 || k > n) return 0;
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
    return r;
}

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

}  // namespace

DifferenceSet build_gamma(const LinearSeed& seed) {
    DifferenceSet out;
    out.kind = DifferenceSet::Kind::Gamma;
    out.b = seed.b();
    out.d = seed.d();
    for (const auto& dn : gamma_dn_vectors(seed.b(), seed.p())) {
        auto dj = dj_from_dn<int>(dn, seed.sites(), seed.d());
        out.elems.emplace(LatticePoint(dn, dj), 0);
    }
    return out;
}

DifferenceSet build_algebra(const DifferenceSet& gamma, int B, std::size_t cap) {
    DifferenceSet out;
    out.kind = DifferenceSet::Kind::AlgebraA;
    out.b = gamma.b;
    out.d = gamma.d;
    LatticePoint zero(std::vector<int>(gamma.b, 0), std::vector<int>(gamma.d, 0));
    out.elems.emplace(zero, 0);
    std::deque<LatticePoint> frontier{zero};
    for (int depth = 1; depth <= B && !frontier.empty(); ++depth) {
        std::deque<LatticePoint> next;
        for (const auto& base : frontier) {
            for (const auto& [step, len] : gamma.elems) {
                if (step == zero) continue;
                LatticePoint cand = base + step;
                if (out.elems.emplace(cand, depth).second) {
                    if (out.elems.size() > cap) {
                        out.elems.erase(cand);
                        out.truncated = true;
                        return out;
                    }
                    next.push_back(std::move(cand));
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

DifferenceSet build_exceptional_G(const LinearSeed& seed, int bound) {
    if (bound < 1) throw std::invalid_argument("build_exceptional_G: bound must be >= 1");
    DifferenceSet out;
    out.kind = DifferenceSet::Kind::ExceptionalG;
    out.b = seed.b();
    out.d = seed.d();
    const int b = seed.b(), d = seed.d();
    for (int alpha = -bound; alpha <= bound; ++alpha) {
        if (alpha == 0) continue;
        for (int k = 0; k < b; ++k) {
            // alpha * (-e_k, j_k)
            std::vector<int> dn(b, 0), dj(d, 0);
            dn[k] = -alpha;
            for (int i = 0; i < d; ++i) dj[i] = alpha * seed.sites()[k][i];
            out.elems.emplace(LatticePoint(dn, dj), alpha);
            // alpha * (e_k' - e_k, j_k - j_k')
            for (int k2 = 0; k2 < b; ++k2) {
                if (k2 == k) continue;
                std::vector<int> dn2(b, 0), dj2(d, 0);
                dn2[k2] = alpha;
                dn2[k] = -alpha;
                for (int i = 0; i < d; ++i) dj2[i] = alpha * (seed.sites()[k][i] - seed.sites()[k2][i]);
                out.elems.emplace(LatticePoint(dn2, dj2), alpha);
            }
        }
    }
    return out;
}

bool in_exceptional_G(const LinearSeed& seed, const LatticePoint& elem) {
    const int b = seed.b(), d = seed.d();
    std::vector<int> nz;
    for (int k = 0; k < b; ++k)
        if (elem.n[k] != 0) nz.push_back(k);
    if (nz.size() == 1) {
        // candidate alpha*(-e_k, j_k) with alpha = -Delta n_k
        int k = nz[0];
        long alpha = -elem.n[k];
        for (int i = 0; i < d; ++i)
            if (elem.j[i] != alpha * seed.sites()[k][i]) return false;
        return true;
    }
    if (nz.size() == 2) {
        // candidate alpha*(e_k' - e_k, j_k - j_k'): components +alpha, -alpha
        int ka = nz[0], kb = nz[1];
        if (elem.n[ka] != -elem.n[kb]) return false;
        int kplus = elem.n[ka] > 0 ? ka : kb;   // k'
        int kminus = kplus == ka ? kb : ka;     // k
        long alpha = elem.n[kplus];
        for (int i = 0; i < d; ++i)
            if (elem.j[i] != alpha * (seed.sites()[kminus][i] - seed.sites()[kplus][i])) return false;
        return true;
    }
    return false;
}

LWValues lw_functions(const LatticePoint& elem, const LinearSeed& seed) {
    const int d = seed.d();
    LWValues out;
    RadicalNumber ndw = seed.n_dot_omega0(elem.n);
    RadicalNumber ndw2 = ndw.squared();
    RadicalNumber dj2(static_cast<long>(elem.norm2sq_j()));
    RadicalNumber four(4L);

    out.sigma_plus = dj2 + ndw2;
    out.sigma_minus = dj2 - ndw2;

    out.L.reserve(d * (d + 3) / 2);
    for (int m = 0; m < d; ++m) {
        long djm = elem.j[m];
        out.L.push_back(RadicalNumber(4 * djm * djm) - four * ndw2);
    }
    for (int m = 0; m < d; ++m)
        for (int m2 = m + 1; m2 < d; ++m2)
            out.L.push_back(RadicalNumber(8L * elem.j[m] * elem.j[m2]));
    RadicalNumber common = four * dj2 - four * ndw2;
    for (int m = 0; m < d; ++m) out.L.push_back(common * RadicalNumber(static_cast<long>(elem.j[m])));

    out.W = (dj2 - ndw2).squared() - four * ndw2;
    return out;
}

ConditionVerdict check_condition_i(const LinearSeed& seed, const DifferenceSet& algebra) {
    ConditionVerdict v;
    for (const auto& [elem, len] : algebra.elems) {
        if (elem.norm1_n() == 0 && elem.norm1_j() == 0) continue;
        LWValues lw = lw_functions(elem, seed);
        ++v.tested;
        auto fail = [&](const char* what, const RadicalNumber& val) {
            v.status = ConditionVerdict::Status::Fails;
            v.witnesses.push_back({elem, what, val.str(), {}});
        };
        if (lw.sigma_plus.is_zero()) fail("sigma_plus", lw.sigma_plus);
        if (lw.sigma_minus.is_zero()) fail("sigma_minus", lw.sigma_minus);
        if (lw.W.is_zero()) fail("W", lw.W);
        if (v.status == ConditionVerdict::Status::Fails) return v;
    }
    v.total = static_cast<double>(v.tested);
    return v;
}

namespace {

// Shared zero-test cache for subdeterminants of the row-stacked [L | W]
// data.  Key: element ids of the rows, column ids, and whether the last
// column is W.
struct DetCache {
    std::map<std::vector<int>, bool> zero;
};

bool det_is_zero(const std::vector<const LWValues*>& lw_by_id, const std::vector<int>& rows,
                 const std::vector<int>& cols, bool with_w, DetCache& cache) {
    std::vector<int> key = rows;
    key.push_back(-1);
    key.insert(key.end(), cols.begin(), cols.end());
    key.push_back(with_w ? -2 : -3);
    auto it = cache.zero.find(key);
    if (it != cache.zero.end()) return it->second;

    std::vector<std::vector<RadicalNumber>> m;
    m.reserve(rows.size());
    for (int r : rows) {
        std::vector<RadicalNumber> row;
        row.reserve(cols.size() + (with_w ? 1 : 0));
        for (int c : cols) row.push_back(lw_by_id[r]->L[c]);
        if (with_w) row.push_back(lw_by_id[r]->W);
        m.push_back(std::move(row));
    }
    bool z = radical_determinant(std::move(m)).is_zero();
    cache.zero.emplace(std::move(key), z);
    return z;
}

// Tests one subset sigma (given as global element ids). Returns the witness
// on failure.
std::optional<Witness> test_subset_ii(const std::vector<const LWValues*>& lw_by_id,
                                      const std::vector<LatticePoint>& elems_by_id,
                                      const std::vector<int>& sigma, int Bprime, DetCache& cache) {
    const int ncols = Bprime - 1;
    for (int rho = 1; rho <= Bprime - 1; ++rho) {
        std::vector<int> rowsel(rho + 1);
        for (int i = 0; i <= rho; ++i) rowsel[i] = i;
        do {
            std::vector<int> rows;
            rows.reserve(rho + 1);
            for (int i : rowsel) rows.push_back(sigma[i]);
            std::vector<int> colsel(rho);
            for (int i = 0; i < rho; ++i) colsel[i] = i;
            do {
                bool minors_ok = true;
                for (int skip = 0; skip <= rho && minors_ok; ++skip) {
                    std::vector<int> sub;
                    sub.reserve(rho);
                    for (int i = 0; i <= rho; ++i)
                        if (i != skip) sub.push_back(rows[i]);
                    if (det_is_zero(lw_by_id, sub, colsel, false, cache)) minors_ok = false;
                }
                if (minors_ok && det_is_zero(lw_by_id, rows, colsel, true, cache)) {
                    Witness w;
                    w.elem = elems_by_id[rows[0]];
                    w.quantity = "det[[L,W]] rank condition";
                    std::vector<std::vector<RadicalNumber>> m;
                    for (int r : rows) {
                        std::vector<RadicalNumber> rw;
                        for (int c : colsel) rw.push_back(lw_by_id[r]->L[c]);
                        rw.push_back(lw_by_id[r]->W);
                        m.push_back(std::move(rw));
                    }
                    w.value = radical_determinant(std::move(m)).str();
                    for (int r : rows) w.context.push_back(elems_by_id[r]);
                    return w;
                }
            } while (next_combination(colsel, ncols));
        } while (next_combination(rowsel, Bprime));
    }
    return std::nullopt;
}

}  // namespace

ConditionVerdict check_condition_ii(const LinearSeed& seed, const DifferenceSet& algebra,
                                    std::optional<SampledMode> sampled, long budget) {
    const int Bp = bound_Bprime(seed.d());
    ConditionVerdict v;

    std::vector<LatticePoint> eligible;
    for (const auto& [elem, len] : algebra.elems) {
        if (elem.norm1_n() == 0 && elem.norm1_j() == 0) continue;
        if (elem.norm1_j() == 0) continue;  // spatial part must be nonzero
        if (in_exceptional_G(seed, elem)) continue;
        eligible.push_back(elem);
    }
    const long n = static_cast<long>(eligible.size());
    if (n < Bp) {
        v.status = ConditionVerdict::Status::Holds;  // vacuous
        v.total = 0;
        return v;
    }

    std::vector<LWValues> lw_store;
    lw_store.reserve(eligible.size());
    for (const auto& e : eligible) lw_store.push_back(lw_functions(e, seed));
    std::vector<const LWValues*> lw_by_id;
    for (const auto& lw : lw_store) lw_by_id.push_back(&lw);

    DetCache cache;
    v.total = binomial_double(n, Bp);

    auto run_subset = [&](const std::vector<int>& sigma) -> bool {
        auto w = test_subset_ii(lw_by_id, eligible, sigma, Bp, cache);
        ++v.tested;
        if (w) {
            v.status = ConditionVerdict::Status::Fails;
            v.witnesses.push_back(std::move(*w));
            return false;
        }
        return true;
    };

    if (!sampled && v.total <= static_cast<double>(budget)) {
        std::vector<int> sigma(Bp);
        for (int i = 0; i < Bp; ++i) sigma[i] = i;
        do {
            if (!run_subset(sigma)) return v;
        } while (next_combination(sigma, static_cast<int>(n)));
        v.status = ConditionVerdict::Status::Holds;
        return v;
    }

    // Deterministic seeded sampling (explicit mode, or exhaustive overflow).
    long count = sampled ? sampled->count : budget;
    std::uint64_t rng_seed = sampled ? sampled->rng_seed : 1;
    std::mt19937_64 rng(rng_seed);
    std::vector<int> pool(n);
    for (long i = 0; i < n; ++i) pool[i] = static_cast<int>(i);
    for (long s = 0; s < count; ++s) {
        for (int i = 0; i < Bp; ++i) {
            long r = i + static_cast<long>(uniform01(rng) * static_cast<double>(n - i));
            if (r >= n) r = n - 1;
            std::swap(pool[i], pool[r]);
        }
        std::vector<int> sigma(pool.begin(), pool.begin() + Bp);
        std::sort(sigma.begin(), sigma.end());
        if (!run_subset(sigma)) return v;
    }
    v.status = v.tested >= v.total ? ConditionVerdict::Status::Holds
                                   : ConditionVerdict::Status::PartiallyVerified;
    return v;
}

ConditionVerdict check_condition_iii(const LinearSeed& seed) {
    ConditionVerdict v;
    SpectralCoeffs support = convolution_power(seed.u0_plus_conj_series(true), seed.p() + 1);
    for (const auto& [pt, val] : support.entries()) {
        ++v.tested;
        // On a characteristic sheet iff (n.omega0)^2 == j^2 + 1 exactly.
        RadicalNumber gap = seed.n_dot_omega0(pt.n).squared() -
                            RadicalNumber(static_cast<long>(pt.norm2sq_j() + 1));
        if (gap.is_zero() && !seed.in_resonant_set(pt)) {
            v.status = ConditionVerdict::Status::Fails;
            Witness w;
            w.elem = pt;
            w.quantity = "(n.omega0)^2 - (j^2+1)";
            w.value = gap.str();
            v.witnesses.push_back(std::move(w));
            return v;
        }
    }
    v.total = static_cast<double>(v.tested);
    return v;
}

bool GenericityCertificate::refuted() const {
    return cond_i.status == ConditionVerdict::Status::Fails ||
           cond_ii.status == ConditionVerdict::Status::Fails ||
           cond_iii.status == ConditionVerdict::Status::Fails;
}

namespace {
nlohmann::ordered_json verdict_json(const ConditionVerdict& v) {
    nlohmann::ordered_json out;
    out["status"] = v.status_str();
    out["tested"] = v.tested;
    out["total"] = v.total;
    if (v.total > 0) out["coverage"] = static_cast<double>(v.tested) / v.total;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& w : v.witnesses) {
        nlohmann::ordered_json e;
        e["element"] = {{"n", w.elem.n}, {"j", w.elem.j}};
        e["quantity"] = w.quantity;
        e["value"] = w.value;
        if (!w.context.empty()) {
            auto ctx = nlohmann::ordered_json::array();
            for (const auto& c : w.context) ctx.push_back({{"n", c.n}, {"j", c.j}});
            e["context"] = std::move(ctx);
        }
        arr.push_back(std::move(e));
    }
    out["witnesses"] = std::move(arr);
    return out;
}
}  // namespace

nlohmann::ordered_json GenericityCertificate::to_json() const {
    nlohmann::ordered_json out;
    out["b"] = b;
    out["d"] = d;
    out["p"] = p;
    out["B"] = B;
    out["Bprime"] = Bprime;
    out["sites"] = sites;
    out["gamma_size"] = gamma_size;
    out["algebra_size"] = algebra_size;
    out["algebra_truncated"] = algebra_truncated;
    out["condition_i"] = verdict_json(cond_i);
    out["condition_ii"] = verdict_json(cond_ii);
    out["condition_iii"] = verdict_json(cond_iii);
    out["generic"] = holds() ? "yes" : (refuted() ? "refuted" : "partially-verified");
    return out;
}

GenericityCertificate certify(const LinearSeed& seed, const CertifyOptions& opt) {
    GenericityCertificate cert;
    cert.b = seed.b();
    cert.d = seed.d();
    cert.p = seed.p();
    cert.B = bound_B(seed.b(), seed.d());
    cert.Bprime = bound_Bprime(seed.d());
    cert.sites = seed.sites();
    DifferenceSet gamma = build_gamma(seed);
    DifferenceSet algebra = build_algebra(gamma, cert.B, opt.algebra_cap);
    cert.gamma_size = gamma.size();
    cert.algebra_size = algebra.size();
    cert.algebra_truncated = algebra.truncated;
    cert.cond_i = check_condition_i(seed, algebra);
    cert.cond_ii = check_condition_ii(seed, algebra, opt.sampled, opt.budget);
    cert.cond_iii = check_condition_iii(seed);
    return cert;
}

namespace {

double det_double(std::vector<std::vector<double>> m) {
    const int n = static_cast<int>(m.size());
    double det = 1;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
        if (m[piv][k] == 0) return 0;
        if (piv != k) {
            std::swap(m[piv], m[k]);
            det = -det;
        }
        det *= m[k][k];
        for (int i = k + 1; i < n; ++i) {
            double f = m[i][k] / m[k][k];
            for (int j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

}  // namespace

MeasureEstimate nongeneric_measure_estimate(int d, int b, int p, long samples,
                                            std::uint64_t rng_seed, double box_halfwidth,
                                            double threshold, long ii_subset_cap) {
    if (samples < 1) throw std::invalid_argument("nongeneric_measure_estimate: samples must be >= 1");
    const int B = bound_B(b, d);
    const int Bp = bound_Bprime(d);

    // The step vectors of the difference algebra depend only on (b, p).
    auto gamma_dn = gamma_dn_vectors(b, p);
    std::vector<std::vector<int>> algebra_dn;
    {
        std::map<std::vector<int>, int> seen;
        std::vector<int> zero(b, 0);
        seen.emplace(zero, 0);
        std::deque<std::vector<int>> frontier{zero};
        for (int depth = 1; depth <= B; ++depth) {
            std::deque<std::vector<int>> next;
            for (const auto& base : frontier) {
                for (const auto& step : gamma_dn) {
                    bool zero_step = std::all_of(step.begin(), step.end(), [](int v) { return v == 0; });
                    if (zero_step) continue;
                    std::vector<int> cand(base);
                    for (int k = 0; k < b; ++k) cand[k] += step[k];
                    if (seen.emplace(cand, depth).second) next.push_back(std::move(cand));
                }
            }
            frontier = std::move(next);
        }
        for (const auto& [dn, len] : seen) algebra_dn.push_back(dn);
    }

    // Exceptional-family membership depends only on the Delta n pattern.
    auto dn_exceptional = [&](const std::vector<int>& dn) {
        int nz = 0, first = -1, second = -1;
        for (int k = 0; k < b; ++k)
            if (dn[k] != 0) {
                if (nz == 0) first = k;
                if (nz == 1) second = k;
                ++nz;
            }
        if (nz == 1) return true;
        if (nz == 2 && dn[first] == -dn[second]) return true;
        return false;
    };

    std::vector<std::vector<int>> eligible_dn;
    for (const auto& dn : algebra_dn) {
        bool zero = std::all_of(dn.begin(), dn.end(), [](int v) { return v == 0; });
        if (zero || dn_exceptional(dn)) continue;
        eligible_dn.push_back(dn);
    }

    std::mt19937_64 rng(rng_seed);
    MeasureEstimate est;
    est.samples = samples;
    for (long s = 0; s < samples; ++s) {
        std::vector<std::vector<double>> sites(b, std::vector<double>(d));
        for (auto& site : sites)
            for (auto& x : site) x = box_halfwidth * (2.0 * uniform01(rng) - 1.0);
        std::vector<double> omega(b);
        for (int k = 0; k < b; ++k) {
            double n2 = 0;
            for (double x : sites[k]) n2 += x * x;
            omega[k] = std::sqrt(n2 + 1.0);
        }
        bool violated = false;

        auto lw_row = [&](const std::vector<int>& dn, std::vector<double>& L, double& W,
                          double& sp, double& sm, double& djmax) {
            double ndw = 0;
            for (int k = 0; k < b; ++k) ndw += dn[k] * omega[k];
            auto dj = dj_from_dn<double>(dn, sites, d);
            double dj2 = 0;
            djmax = 0;
            for (double x : dj) {
                dj2 += x * x;
                djmax = std::max(djmax, std::abs(x));
            }
            double ndw2 = ndw * ndw;
            L.clear();
            for (int m = 0; m < d; ++m) L.push_back(4 * dj[m] * dj[m] - 4 * ndw2);
            for (int m = 0; m < d; ++m)
                for (int m2 = m + 1; m2 < d; ++m2) L.push_back(8 * dj[m] * dj[m2]);
            for (int m = 0; m < d; ++m) L.push_back((4 * dj2 - 4 * ndw2) * dj[m]);
            W = (dj2 - ndw2) * (dj2 - ndw2) - 4 * ndw2;
            sp = dj2 + ndw2;
            sm = dj2 - ndw2;
        };

        // Condition (i) in floating point.
        std::vector<double> L;
        double W, sp, sm, djmax;
        for (const auto& dn : algebra_dn) {
            if (std::all_of(dn.begin(), dn.end(), [](int v) { return v == 0; })) continue;
            lw_row(dn, L, W, sp, sm, djmax);
            if (std::abs(sp) < threshold || std::abs(sm) < threshold || std::abs(W) < threshold) {
                violated = true;
                break;
            }
        }

        // Condition (ii) in floating point over a deterministic subset prefix.
        if (!violated && static_cast<long>(eligible_dn.size()) >= Bp && ii_subset_cap > 0) {
            std::vector<std::vector<double>> Ls(eligible_dn.size());
            std::vector<double> Ws(eligible_dn.size()), djm(eligible_dn.size());
            for (std::size_t i = 0; i < eligible_dn.size(); ++i)
                lw_row(eligible_dn[i], Ls[i], Ws[i], sp, sm, djm[i]);
            std::vector<int> sigma(Bp);
            for (int i = 0; i < Bp; ++i) sigma[i] = i;
            long tested = 0;
            do {
                bool dj_ok = true;
                for (int i : sigma) dj_ok = dj_ok && djm[i] > threshold;
                if (dj_ok) {
                    std::vector<std::vector<double>> mw;
                    for (int i : sigma) {
                        auto row = Ls[i];
                        row.push_back(Ws[i]);
                        mw.push_back(std::move(row));
                    }
                    // Full-size proxy of the rank condition: all (Bp-1)-minors
                    // of the L block nonzero and det [[L,W]] below threshold.
                    bool minors_ok = true;
                    for (int skip = 0; skip < Bp && minors_ok; ++skip) {
                        std::vector<std::vector<double>> sub;
                        for (int i = 0; i < Bp; ++i) {
                            if (i == skip) continue;
                            std::vector<double> row(mw[i].begin(), mw[i].end() - 1);
                            sub.push_back(std::move(row));
                        }
                        if (std::abs(det_double(std::move(sub))) < threshold) minors_ok = false;
                    }
                    if (minors_ok && std::abs(det_double(std::move(mw))) < threshold) {
                        violated = true;
                        break;
                    }
                }
                ++tested;
            } while (tested < ii_subset_cap &&
                     next_combination(sigma, static_cast<int>(eligible_dn.size())));
        }

        if (violated) ++est.violations;
    }
    return est;
}

}  // namespace hyperwave
