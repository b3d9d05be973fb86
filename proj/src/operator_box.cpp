#include "hyperwave/operator_box.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace hyperwave {

namespace {

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

void enumerate_l1_rec(int b, int k, int remaining, std::vector<int>& n,
                      std::vector<std::vector<int>>& out) {
    if (k == b) {
        out.push_back(n);
        return;
    }
    for (int t = -remaining; t <= remaining; ++t) {
        n[k] = t;
        enumerate_l1_rec(b, k + 1, remaining - std::abs(t), n, out);
    }
    n[k] = 0;
}

}  // namespace

SpectralCoeffs a0_kernel(const LinearSeed& seed, const std::vector<double>* amplitudes) {
    const LinearSeed* s = &seed;
    std::optional<LinearSeed> scaled;
    if (amplitudes) {
        scaled = seed.with_amplitudes(*amplitudes);
        s = &*scaled;
    }
    return convolution_power(s->u0_plus_conj_series(), s->p());
}

SpectralCoeffs linearization_kernel(const SpectralCoeffs& v, int p, const HTerms& h_terms) {
    SpectralCoeffs kernel = convolution_power(v, p);
    kernel *= static_cast<double>(p + 1);
    for (const auto& term : h_terms) {
        SpectralCoeffs extra = convolve(term.alpha, convolution_power(v, p + term.m - 1));
        extra *= static_cast<double>(p + term.m);
        kernel += extra;
    }
    return kernel;
}

OperatorBox assemble_FprimeN(const LinearSeed& seed, const std::vector<double>& omega, int N,
                             int j_radius, const HTerms& h_terms,
                             const SpectralCoeffs* linearization_u) {
    if (static_cast<int>(omega.size()) != seed.b())
        throw std::invalid_argument("assemble_FprimeN: omega must have b entries");
    if (N < 1 || j_radius < 1) throw std::invalid_argument("assemble_FprimeN: radii must be >= 1");
    validate_h_terms(h_terms, seed);

    OperatorBox op;
    op.b = seed.b();
    op.d = seed.d();
    op.p = seed.p();
    op.n_radius = N;
    op.j_radius = j_radius;
    op.omega = omega;

    SpectralCoeffs u = linearization_u ? *linearization_u : seed.u0_series();
    if (u.b() != seed.b() || u.d() != seed.d())
        throw std::invalid_argument("assemble_FprimeN: linearization point dims mismatch");
    SpectralCoeffs v = u;
    v += u.mirror_conjugate();
    v *= 0.5;
    v.set_real_representing(true);
    op.half_kernel = linearization_kernel(v, seed.p(), h_terms);
    op.half_kernel *= 0.5;

    std::vector<std::vector<int>> ns;
    {
        std::vector<int> n(seed.b(), 0);
        enumerate_l1_rec(seed.b(), 0, N, n, ns);
    }
    std::vector<int> j(seed.d(), -j_radius);
    std::vector<std::vector<int>> js;
    while (true) {
        js.push_back(j);
        int k = seed.d() - 1;
        while (k >= 0 && j[k] == j_radius) j[k--] = -j_radius;
        if (k < 0) break;
        ++j[k];
    }

    for (const auto& n : ns)
        for (const auto& jj : js) op.points.emplace_back(n, jj);
    std::sort(op.points.begin(), op.points.end());
    for (int i = 0; i < op.point_count(); ++i) op.index.emplace(op.points[i], i);

    op.diag_u.resize(op.point_count());
    op.diag_ubar.resize(op.point_count());
    op.char_u.assign(op.point_count(), 0);
    op.char_ubar.assign(op.point_count(), 0);
    for (int i = 0; i < op.point_count(); ++i) {
        const auto& pt = op.points[i];
        double ndw = 0;
        for (int k = 0; k < seed.b(); ++k) ndw += pt.n[k] * omega[k];
        double freq = std::sqrt(static_cast<double>(pt.norm2sq_j()) + 1.0);
        op.diag_u[i] = ndw + freq;
        op.diag_ubar[i] = -ndw + freq;
        RadicalNumber exact = seed.n_dot_omega0(pt.n);
        if ((exact.squared() - RadicalNumber(static_cast<long>(pt.norm2sq_j() + 1))).is_zero()) {
            int sgn = exact.sign();
            if (sgn < 0) {
                op.char_u[i] = 1;
                op.diag_u[i] = 0.0;  // exact zero at omega0; kept exact when omega == omega0
            } else if (sgn > 0) {
                op.char_ubar[i] = 1;
                op.diag_ubar[i] = 0.0;
            }
        }
    }
    // The exact-zero overwrite above is only valid at omega = omega0.
    auto w0 = seed.omega0_double();
    bool omega_is_omega0 = true;
    for (int k = 0; k < seed.b(); ++k) omega_is_omega0 = omega_is_omega0 && omega[k] == w0[k];
    if (!omega_is_omega0) {
        for (int i = 0; i < op.point_count(); ++i) {
            const auto& pt = op.points[i];
            double ndw = 0;
            for (int k = 0; k < seed.b(); ++k) ndw += pt.n[k] * omega[k];
            double freq = std::sqrt(static_cast<double>(pt.norm2sq_j()) + 1.0);
            op.diag_u[i] = ndw + freq;
            op.diag_ubar[i] = -ndw + freq;
        }
    }
    return op;
}

Eigen::SparseMatrix<Complex> OperatorBox::matrix() const {
    const int P = point_count();
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(2 * P * (half_kernel.size() * 2 + 1));
    for (int i = 0; i < P; ++i) {
        trip.emplace_back(i, i, Complex(diag_u[i], 0));
        trip.emplace_back(P + i, P + i, Complex(diag_ubar[i], 0));
        double w = 1.0 / std::sqrt(static_cast<double>(points[i].norm2sq_j()) + 1.0);
        for (const auto& [delta, val] : half_kernel.entries()) {
            LatticePoint col_pt = points[i] - delta;
            auto it = index.find(col_pt);
            if (it == index.end()) continue;
            Complex entry = w * val;
            trip.emplace_back(i, it->second, entry);
            trip.emplace_back(i, P + it->second, entry);
            trip.emplace_back(P + i, it->second, entry);
            trip.emplace_back(P + i, P + it->second, entry);
        }
    }
    Eigen::SparseMatrix<Complex> m(2 * P, 2 * P);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return m;
}

std::vector<int> OperatorBox::characteristic_rows() const {
    std::vector<int> out;
    const int P = point_count();
    for (int i = 0; i < P; ++i)
        if (char_u[i]) out.push_back(i);
    for (int i = 0; i < P; ++i)
        if (char_ubar[i]) out.push_back(P + i);
    return out;
}

std::vector<CharBlock> restrict_PA0P(const SpectralCoeffs& kernel, const CharacteristicSet& cs) {
    std::vector<std::pair<LatticePoint, bool>> rows;
    for (const auto& pt : cs.plus) rows.emplace_back(pt, false);
    for (const auto& pt : cs.minus) rows.emplace_back(pt, true);
    std::sort(rows.begin(), rows.end());

    const int n = static_cast<int>(rows.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) {
            LatticePoint diff = rows[i].first - rows[k].first;
            if (std::abs(kernel.at(diff)) != 0.0) parent[find(i)] = find(k);
        }

    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);

    std::vector<CharBlock> blocks;
    for (const auto& [root, ids] : groups) {
        CharBlock blk;
        for (int i : ids) blk.rows.push_back(rows[i]);
        const int m = static_cast<int>(ids.size());
        blk.mat.resize(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                blk.mat(r, c) = kernel.at(blk.rows[r].first - blk.rows[c].first).real();
        blocks.push_back(std::move(blk));
    }
    return blocks;
}

bool blocks_match_components(const std::vector<CharBlock>& blocks, const ComponentReport& report) {
    std::vector<std::vector<LatticePoint>> block_sets;
    for (const auto& blk : blocks) {
        std::vector<LatticePoint> pts;
        for (const auto& [pt, is_ubar] : blk.rows) pts.push_back(pt);
        std::sort(pts.begin(), pts.end());
        block_sets.push_back(std::move(pts));
    }
    std::sort(block_sets.begin(), block_sets.end());
    auto comps = report.components;
    std::sort(comps.begin(), comps.end());
    return block_sets == comps;
}

GapReport block_gap(const std::vector<CharBlock>& blocks, double eps, double a_inf, int p) {
    GapReport report;
    report.epsilon = eps;
    report.a_inf = a_inf;
    report.bound = 1.0 / (eps * std::pow(a_inf, p));
    if (blocks.empty()) {
        report.pass = true;
        return report;
    }
    double worst = 0;
    for (const auto& blk : blocks) {
        BlockGapEntry entry;
        entry.rows = blk.rows;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk.mat, Eigen::EigenvaluesOnly);
        entry.sigma_min = es.eigenvalues().cwiseAbs().minCoeff();
        if (entry.sigma_min <= 0 || !std::isfinite(entry.sigma_min)) {
            entry.singular = true;
            entry.inverse_norm = std::numeric_limits<double>::infinity();
        } else {
            entry.inverse_norm = 1.0 / entry.sigma_min;
        }
        worst = std::max(worst, entry.inverse_norm);
        report.blocks.push_back(std::move(entry));
    }
    report.inverse_norm = worst;
    report.pass = std::isfinite(worst) && worst <= report.bound;
    return report;
}

Prop1Measure measure_estimate_prop1(const LinearSeed& seed_template, const LatticeBox& box,
                                    std::vector<double> eps_list, double a_inf, long samples,
                                    std::uint64_t rng_seed) {
    if (samples < 1) throw std::invalid_argument("measure_estimate_prop1: samples must be >= 1");
    if (seed_template.p() % 2 != 0)
        throw std::invalid_argument("measure_estimate_prop1: requires even p");
    Prop1Measure out;
    out.eps = std::move(eps_list);
    out.samples = samples;
    out.pass_fraction.assign(out.eps.size(), 0.0);

    CharacteristicSet cs = enumerate_characteristics(seed_template, box);
    const int p = seed_template.p();
    std::mt19937_64 rng(rng_seed);
    std::vector<long> passes(out.eps.size(), 0);
    for (long s = 0; s < samples; ++s) {
        std::vector<double> a(seed_template.b());
        double amax = 0;
        for (auto& x : a) {
            x = a_inf * (1.0 - uniform01(rng));  // uniform draw from (0, a_inf]
            amax = std::max(amax, x);
        }
        SpectralCoeffs kernel = a0_kernel(seed_template, &a);
        auto blocks = restrict_PA0P(kernel, cs);
        double sigma = std::numeric_limits<double>::infinity();
        for (const auto& blk : blocks) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk.mat, Eigen::EigenvaluesOnly);
            sigma = std::min(sigma, es.eigenvalues().cwiseAbs().minCoeff());
        }
        for (std::size_t e = 0; e < out.eps.size(); ++e)
            if (sigma >= out.eps[e] * std::pow(amax, p)) ++passes[e];
    }
    for (std::size_t e = 0; e < out.eps.size(); ++e)
        out.pass_fraction[e] = static_cast<double>(passes[e]) / static_cast<double>(samples);
    return out;
}

SchurResult schur_reduce(const Eigen::MatrixXcd& A, const std::vector<int>& p_rows, double lambda,
                         double sing_tol) {
    const int n = static_cast<int>(A.rows());
    std::vector<char> in_p(n, 0);
    for (int r : p_rows) in_p[r] = 1;
    std::vector<int> pc;
    for (int i = 0; i < n; ++i)
        if (!in_p[i]) pc.push_back(i);

    SchurResult res;
    const int np = static_cast<int>(p_rows.size()), nc = static_cast<int>(pc.size());
    Eigen::MatrixXcd App(np, np), Apc(np, nc), Acp(nc, np), Acc(nc, nc);
    for (int r = 0; r < np; ++r)
        for (int c = 0; c < np; ++c) App(r, c) = A(p_rows[r], p_rows[c]);
    for (int r = 0; r < np; ++r)
        for (int c = 0; c < nc; ++c) Apc(r, c) = A(p_rows[r], pc[c]);
    for (int r = 0; r < nc; ++r)
        for (int c = 0; c < np; ++c) Acp(r, c) = A(pc[r], p_rows[c]);
    for (int r = 0; r < nc; ++r)
        for (int c = 0; c < nc; ++c) Acc(r, c) = A(pc[r], pc[c]);

    if (nc == 0) {
        res.H = App - lambda * Eigen::MatrixXcd::Identity(np, np);
        res.ok = true;
        res.pc_sigma_min = std::numeric_limits<double>::infinity();
        return res;
    }
    Eigen::MatrixXcd Acc_l = Acc - lambda * Eigen::MatrixXcd::Identity(nc, nc);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(Acc_l, Eigen::ComputeThinU | Eigen::ComputeThinV);
    res.pc_sigma_min = svd.singularValues()(nc - 1);
    double scale = svd.singularValues()(0);
    if (res.pc_sigma_min <= sing_tol * std::max(scale, 1.0)) {
        res.ok = false;  // outside the analyticity window
        return res;
    }
    res.H = App - lambda * Eigen::MatrixXcd::Identity(np, np) + Apc * svd.solve(Acp);
    res.ok = true;
    return res;
}

SchurResult schur_reduce(const OperatorBox& op, double lambda, double sing_tol) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd(op.matrix());
    return schur_reduce(A, op.characteristic_rows(), lambda, sing_tol);
}

double sigma_min_sparse(const Eigen::SparseMatrix<Complex>& A, double tol, int max_iters) {
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) return 0.0;
    const int n = static_cast<int>(A.rows());
    Eigen::VectorXcd x = Eigen::VectorXcd::Ones(n);
    for (int i = 0; i < n; ++i) x(i) += Complex(0.0, 1e-3 * (i % 7));  // deterministic asymmetry
    x.normalize();
    double lambda_prev = 0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXcd y = lu.adjoint().solve(x);
        Eigen::VectorXcd z = lu.solve(y);
        double lambda = z.norm();
        if (lambda == 0) return std::numeric_limits<double>::infinity();
        x = z / lambda;
        if (it > 4 && std::abs(lambda - lambda_prev) <= tol * lambda) {
            lambda_prev = lambda;
            break;
        }
        lambda_prev = lambda;
    }
    return 1.0 / std::sqrt(lambda_prev);
}

double sigma_min_of(const Eigen::SparseMatrix<Complex>& A, int dense_threshold) {
    if (A.rows() <= dense_threshold) {
        Eigen::MatrixXcd dense(A);
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense);
        return svd.singularValues()(A.rows() - 1);
    }
    return sigma_min_sparse(A);
}

GapReport gap_prop3(const LinearSeed& seed, const OperatorBox& op, double eps, double q,
                    const GapOptions& opts) {
    const double delta = seed.delta();
    if (delta * op.n_radius > opts.dn_smallness)
        throw std::invalid_argument("gap_prop3: delta * N exceeds the smallness threshold");

    GapReport report;
    report.epsilon = eps;
    report.a_inf = delta;
    report.delta = delta;
    report.q_used = q;
    report.N = op.n_radius;
    report.exact_zero_rows = op.characteristic_rows();

    Eigen::SparseMatrix<Complex> M = op.matrix();
    double sigma = sigma_min_of(M, opts.dense_threshold);
    report.inverse_norm = sigma > 0 ? 1.0 / sigma : std::numeric_limits<double>::infinity();
    report.bound = std::pow(static_cast<double>(op.n_radius), q) / (eps * std::pow(delta, op.p));
    report.pass = std::isfinite(report.inverse_norm) && report.inverse_norm <= report.bound;

    // Complement block and coupling diagnostics.
    const int n = static_cast<int>(M.rows());
    std::vector<char> is_char(n, 0);
    for (int r : report.exact_zero_rows) is_char[r] = 1;
    std::vector<int> pc, pr;
    for (int i = 0; i < n; ++i) (is_char[i] ? pr : pc).push_back(i);
    if (!pc.empty()) {
        Eigen::MatrixXcd dense(M);
        Eigen::MatrixXcd Acc(pc.size(), pc.size());
        for (std::size_t r = 0; r < pc.size(); ++r)
            for (std::size_t c = 0; c < pc.size(); ++c) Acc(r, c) = dense(pc[r], pc[c]);
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(Acc, Eigen::ComputeThinU | Eigen::ComputeThinV);
        double smin = svd.singularValues()(static_cast<Eigen::Index>(pc.size()) - 1);
        report.pc_inverse_norm = smin > 0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
        if (!pr.empty()) {
            Eigen::MatrixXcd Apc(pr.size(), pc.size()), Acp(pc.size(), pr.size());
            for (std::size_t r = 0; r < pr.size(); ++r)
                for (std::size_t c = 0; c < pc.size(); ++c) Apc(r, c) = dense(pr[r], pc[c]);
            for (std::size_t r = 0; r < pc.size(); ++r)
                for (std::size_t c = 0; c < pr.size(); ++c) Acp(r, c) = dense(pc[r], pr[c]);
            Eigen::MatrixXcd coupling = Apc * svd.solve(Acp);
            Eigen::BDCSVD<Eigen::MatrixXcd> csvd(coupling);
            report.coupling_norm = csvd.singularValues()(0);
        }
    }

    CharacteristicSet cs =
        enumerate_characteristics(seed, LatticeBox{op.n_radius, op.j_radius});
    GapReport blocks = block_gap(restrict_PA0P(a0_kernel(seed), cs), eps, delta, op.p);
    report.pa0p_inverse_norm = blocks.inverse_norm;
    report.blocks = std::move(blocks.blocks);
    return report;
}

nlohmann::ordered_json GapReport::to_json() const {
    nlohmann::ordered_json out;
    auto finite_or_string = [](double v) -> nlohmann::ordered_json {
        if (std::isfinite(v)) return v;
        return "inf";
    };
    out["inverse_norm"] = finite_or_string(inverse_norm);
    out["bound"] = bound;
    out["epsilon"] = epsilon;
    out["a_inf"] = a_inf;
    out["pass"] = pass;
    out["delta"] = delta;
    out["q_used"] = q_used;
    out["N"] = N;
    out["pc_inverse_norm"] = finite_or_string(pc_inverse_norm);
    out["coupling_norm"] = finite_or_string(coupling_norm);
    out["pa0p_inverse_norm"] = finite_or_string(pa0p_inverse_norm);
    out["exact_zero_rows"] = exact_zero_rows;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& blk : blocks) {
        nlohmann::ordered_json e;
        auto rows = nlohmann::ordered_json::array();
        for (const auto& [pt, is_ubar] : blk.rows)
            rows.push_back({{"n", pt.n}, {"j", pt.j}, {"conjugate_row", is_ubar}});
        e["rows"] = std::move(rows);
        e["sigma_min"] = blk.sigma_min;
        e["inverse_norm"] = finite_or_string(blk.inverse_norm);
        e["singular"] = blk.singular;
        arr.push_back(std::move(e));
    }
    out["blocks"] = std::move(arr);
    return out;
}

}  // namespace hyperwave
