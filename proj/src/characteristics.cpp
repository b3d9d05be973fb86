#include "hyperwave/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace hyperwave {

namespace {

// All n in Z^b with ||n||_1 <= radius, lexicographic order.
void enumerate_ball_rec(int b, int k, int remaining, std::vector<int>& n,
                        std::vector<std::vector<int>>& out) {
    if (k == b) {
        out.push_back(n);
        return;
    }
    for (int t = -remaining; t <= remaining; ++t) {
        n[k] = t;
        enumerate_ball_rec(b, k + 1, remaining - std::abs(t), n, out);
    }
    n[k] = 0;
}

std::vector<std::vector<int>> l1_ball(int b, int radius) {
    std::vector<int> n(b, 0);
    std::vector<std::vector<int>> out;
    enumerate_ball_rec(b, 0, radius, n, out);
    return out;
}

// All j in the sup-ball grouped by squared euclidean norm.
std::map<long, std::vector<std::vector<int>>> js_by_norm(int d, int radius) {
    std::map<long, std::vector<std::vector<int>>> out;
    std::vector<int> j(d, -radius);
    while (true) {
        long n2 = 0;
        for (int v : j) n2 += static_cast<long>(v) * v;
        out[n2].push_back(j);
        int k = d - 1;
        while (k >= 0 && j[k] == radius) j[k--] = -radius;
        if (k < 0) break;
        ++j[k];
    }
    return out;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int c) { parent[find(a)] = find(c); }
};

}  // namespace

CharacteristicSet enumerate_characteristics(const LinearSeed& seed, const LatticeBox& box) {
    if (box.n_radius < 1 || box.j_radius < 1)
        throw std::invalid_argument("enumerate_characteristics: box radii must be >= 1");
    CharacteristicSet cs;
    cs.b = seed.b();
    cs.d = seed.d();
    cs.box = box;

    auto norm_groups = js_by_norm(seed.d(), box.j_radius);
    for (const auto& n : l1_ball(seed.b(), box.n_radius)) {
        bool zero = std::all_of(n.begin(), n.end(), [](int v) { return v == 0; });
        if (zero) continue;  // sqrt(j^2+1) >= 1 cannot vanish
        RadicalNumber ndw = seed.n_dot_omega0(n);
        int sgn = ndw.sign();
        if (sgn == 0) continue;
        // On a sheet iff (n.omega0)^2 = j^2 + 1 with integer value.
        RadicalNumber sq = ndw.squared();
        if (!sq.is_rational()) continue;
        Rational s = sq.rational_part();
        if (s.get_den() != 1) continue;
        mpz_class target_z = s.get_num() - 1;
        if (target_z < 0 || !target_z.fits_slong_p()) continue;
        auto it = norm_groups.find(target_z.get_si());
        if (it == norm_groups.end()) continue;
        for (const auto& j : it->second) {
            LatticePoint pt(n, j);
            if (sgn < 0)
                cs.plus.insert(std::move(pt));  // n.omega0 = -sqrt(j^2+1)
            else
                cs.minus.insert(std::move(pt));
        }
    }
    return cs;
}

ComponentReport connected_components(const CharacteristicSet& cs, const DifferenceSet& steps,
                                     AdjacencyMode mode) {
    ComponentReport report;
    report.mode = mode;
    report.bound = bound_B(cs.b, cs.d);

    std::vector<LatticePoint> pts(cs.plus.begin(), cs.plus.end());
    pts.insert(pts.end(), cs.minus.begin(), cs.minus.end());
    std::sort(pts.begin(), pts.end());

    UnionFind uf(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t k = i + 1; k < pts.size(); ++k) {
            LatticePoint diff = pts[i] - pts[k];
            if (diff.norm1_n() == 0 && diff.norm1_j() == 0) continue;
            if (steps.contains(diff)) uf.unite(static_cast<int>(i), static_cast<int>(k));
        }

    std::map<int, std::vector<LatticePoint>> groups;
    for (std::size_t i = 0; i < pts.size(); ++i) groups[uf.find(static_cast<int>(i))].push_back(pts[i]);
    for (auto& [root, comp] : groups) {
        std::sort(comp.begin(), comp.end());
        report.max_size = std::max(report.max_size, static_cast<int>(comp.size()));
        report.components.push_back(std::move(comp));
    }
    std::sort(report.components.begin(), report.components.end());
    return report;
}

bool verify_prop2_bound(const ComponentReport& report, std::vector<LatticePoint>* counterexample) {
    for (const auto& comp : report.components)
        if (static_cast<int>(comp.size()) > report.bound) {
            if (counterexample) *counterexample = comp;
            return false;
        }
    return true;
}

DiophantineProfile diophantine_profile(const LinearSeed& seed, const LatticeBox& box) {
    if (box.n_radius < 2) throw std::invalid_argument("diophantine_profile: need n radius >= 2");
    // Distinct sqrt(j^2+1) values over the box, paired with the integer j^2+1.
    std::vector<std::pair<double, long>> freqs;
    for (const auto& [n2, js] : js_by_norm(seed.d(), box.j_radius))
        freqs.emplace_back(std::sqrt(static_cast<double>(n2) + 1.0), n2 + 1);
    std::sort(freqs.begin(), freqs.end());
    freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());

    std::vector<double> best(box.n_radius + 1, std::numeric_limits<double>::infinity());
    for (const auto& n : l1_ball(seed.b(), box.n_radius)) {
        int norm = 0;
        for (int v : n) norm += std::abs(v);
        RadicalNumber ndw = seed.n_dot_omega0(n);
        double t = std::abs(ndw.to_double());
        auto it = std::lower_bound(freqs.begin(), freqs.end(), std::make_pair(t, 0L));
        // Neighbors beyond the nearest matter when the nearest is an exact zero.
        for (long off = -2; off <= 1; ++off) {
            auto cand = it + off;
            if (cand < freqs.begin() || cand >= freqs.end()) continue;
            double gap = std::abs(cand->first - t);
            int slot = std::max(norm, 1);
            if (gap < best[slot]) {
                if (gap < 1e-9 && (ndw.squared() - RadicalNumber(cand->second)).is_zero())
                    continue;  // exact characteristic point
                best[slot] = gap;
            }
        }
    }

    DiophantineProfile profile;
    double running = std::numeric_limits<double>::infinity();
    for (int N = 1; N <= box.n_radius; ++N) {
        running = std::min(running, best[N]);
        if (N >= 2 && std::isfinite(running)) profile.table.emplace_back(N, running);
    }
    if (profile.table.size() < 3)
        throw std::invalid_argument("diophantine_profile: fewer than 3 usable N values");

    // Fit log m(N) = log c' - q log N.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [N, m] : profile.table) {
        double x = std::log(static_cast<double>(N)), y = std::log(m);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double count = static_cast<double>(profile.table.size());
    double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    double intercept = (sy - slope * sx) / count;
    profile.q = -slope;
    profile.cprime = std::exp(intercept);
    return profile;
}

nlohmann::ordered_json charset_to_json(const CharacteristicSet& cs,
                                       const std::vector<ComponentReport>& reports,
                                       const DiophantineProfile& profile) {
    nlohmann::ordered_json out;
    out["b"] = cs.b;
    out["d"] = cs.d;
    out["box"] = {{"n_radius", cs.box.n_radius}, {"j_radius", cs.box.j_radius}};
    auto dump_pts = [](const std::set<LatticePoint>& pts) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& p : pts) arr.push_back({{"n", p.n}, {"j", p.j}});
        return arr;
    };
    out["plus"] = dump_pts(cs.plus);
    out["minus"] = dump_pts(cs.minus);
    auto reps = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json e;
        e["adjacency"] = r.mode == AdjacencyMode::GammaStep ? "gamma-step" : "algebra-step";
        e["max_size"] = r.max_size;
        e["bound_B"] = r.bound;
        e["bound_holds"] = r.max_size <= r.bound;
        auto comps = nlohmann::ordered_json::array();
        for (const auto& c : r.components) {
            auto pts = nlohmann::ordered_json::array();
            for (const auto& p : c) pts.push_back({{"n", p.n}, {"j", p.j}});
            comps.push_back(std::move(pts));
        }
        e["components"] = std::move(comps);
        reps.push_back(std::move(e));
    }
    out["component_reports"] = std::move(reps);
    nlohmann::ordered_json prof;
    prof["cprime"] = profile.cprime;
    prof["q"] = profile.q;
    auto t = nlohmann::ordered_json::array();
    for (const auto& [N, m] : profile.table) t.push_back({{"N", N}, {"m", m}});
    prof["table"] = std::move(t);
    out["diophantine"] = std::move(prof);
    return out;
}

}  // namespace hyperwave
