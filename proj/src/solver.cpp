#include "hyperwave/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace hyperwave {

namespace {

SpectralCoeffs v_of(const SpectralCoeffs& u) {
    SpectralCoeffs v = u;
    v += u.mirror_conjugate();
    v *= 0.5;
    v.set_real_representing(true);
    return v;
}

/// Nonlinear convolution part: v^{*(p+1)} (optional) plus the analytic tail.
SpectralCoeffs nonlinear_part(const SpectralCoeffs& v, const LinearSeed& seed,
                              const HTerms& h_terms, bool include_primary) {
    SpectralCoeffs V(v.b(), v.d(), true);
    if (include_primary) V = convolution_power(v, seed.p() + 1);
    for (const auto& term : h_terms) V += convolve(term.alpha, convolution_power(v, seed.p() + term.m));
    return V;
}

double wj(const LatticePoint& pt) {
    return 1.0 / std::sqrt(static_cast<double>(pt.norm2sq_j()) + 1.0);
}

bool in_box(const LatticePoint& pt, const SolverBox& box) {
    for (int v : pt.n)
        if (std::abs(v) > box.n_radius) return false;
    for (int v : pt.j)
        if (std::abs(v) > box.j_radius) return false;
    return true;
}

std::vector<LatticePoint> box_points(int b, int d, const SolverBox& box) {
    std::vector<LatticePoint> out;
    std::vector<int> n(b, -box.n_radius), j(d, -box.j_radius);
    while (true) {
        std::vector<int> jj(d, -box.j_radius);
        while (true) {
            out.emplace_back(n, jj);
            int k = d - 1;
            while (k >= 0 && jj[k] == box.j_radius) jj[k--] = -box.j_radius;
            if (k < 0) break;
            ++jj[k];
        }
        int k = b - 1;
        while (k >= 0 && n[k] == box.n_radius) n[k--] = -box.n_radius;
        if (k < 0) break;
        ++n[k];
    }
    std::sort(out.begin(), out.end());
    return out;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SpectralCoeffs residual_F(const SpectralCoeffs& u, const std::vector<double>& omega,
                          const LinearSeed& seed, const HTerms& h_terms, bool include_primary) {
    if (static_cast<int>(omega.size()) != seed.b())
        throw std::invalid_argument("residual_F: omega must have b entries");
    SpectralCoeffs V = nonlinear_part(v_of(u), seed, h_terms, include_primary);
    SpectralCoeffs R(u.b(), u.d());
    for (const auto& [pt, val] : u.entries()) {
        double ndw = 0;
        for (int k = 0; k < seed.b(); ++k) ndw += pt.n[k] * omega[k];
        double diag = ndw + std::sqrt(static_cast<double>(pt.norm2sq_j()) + 1.0);
        R.add(pt, diag * val);
    }
    for (const auto& [pt, val] : V.entries()) R.add(pt, wj(pt) * val);
    return R;
}

LsSplit lyapunov_schmidt_split(const LinearSeed& seed, const SolverBox& box) {
    if (box.n_radius < 1) throw std::invalid_argument("split: box must contain the resonant set");
    for (int k = 0; k < seed.b(); ++k)
        if (!in_box(seed.support_point(k), box))
            throw std::invalid_argument("split: box must contain the resonant set");
    LsSplit out;
    for (int k = 0; k < seed.b(); ++k) out.q_rows.push_back({seed.support_point(k), false});
    for (int k = 0; k < seed.b(); ++k) out.q_rows.push_back({seed.conjugate_support_point(k), true});
    std::sort(out.q_rows.begin(), out.q_rows.end());
    for (const auto& pt : box_points(seed.b(), seed.d(), box)) {
        DoubledRow ru{pt, false}, rc{pt, true};
        if (!std::binary_search(out.q_rows.begin(), out.q_rows.end(), ru)) out.p_rows.push_back(ru);
        if (!std::binary_search(out.q_rows.begin(), out.q_rows.end(), rc)) out.p_rows.push_back(rc);
    }
    std::sort(out.p_rows.begin(), out.p_rows.end());
    return out;
}

NewtonState initial_state(const LinearSeed& seed, const SolverBox& box, const HTerms& h_terms,
                          const AnalyticNorm& nrm) {
    NewtonState st;
    st.u = seed.u0_series();
    st.omega = seed.omega0_double();
    st.box = box;
    lyapunov_schmidt_split(seed, box);  // validates the box
    st.residual_norm = weighted_norm(residual_F(st.u, st.omega, seed, h_terms), nrm);
    st.history = {st.residual_norm};
    return st;
}

NewtonState newton_step(const NewtonState& state, const LinearSeed& seed, const HTerms& h_terms,
                        const AnalyticNorm& nrm) {
    const int b = seed.b(), d = seed.d();
    // Active unknowns: box points minus the pinned resonant entries, per half.
    std::vector<LatticePoint> pts = box_points(b, d, state.box);
    std::map<LatticePoint, int> idx_u, idx_c;
    std::vector<LatticePoint> act_u, act_c;
    for (const auto& pt : pts) {
        bool pinned_u = false, pinned_c = false;
        for (int k = 0; k < b; ++k) {
            if (pt == seed.support_point(k)) pinned_u = true;
            if (pt == seed.conjugate_support_point(k)) pinned_c = true;
        }
        if (!pinned_u) {
            idx_u.emplace(pt, static_cast<int>(act_u.size()));
            act_u.push_back(pt);
        }
        if (!pinned_c) {
            idx_c.emplace(pt, static_cast<int>(act_c.size()));
            act_c.push_back(pt);
        }
    }
    const int nu = static_cast<int>(act_u.size());
    const int nc = static_cast<int>(act_c.size());
    const int dim = nu + nc;

    SpectralCoeffs G = linearization_kernel(v_of(state.u), seed.p(), h_terms);
    SpectralCoeffs R = residual_F(state.u, state.omega, seed, h_terms);

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd rhs(dim);
    for (int r = 0; r < nu; ++r) {
        const auto& pt = act_u[r];
        double ndw = 0;
        for (int k = 0; k < b; ++k) ndw += pt.n[k] * state.omega[k];
        M(r, r) += ndw + std::sqrt(static_cast<double>(pt.norm2sq_j()) + 1.0);
        const double w = wj(pt);
        for (const auto& [delta, val] : G.entries()) {
            LatticePoint col = pt - delta;
            Complex e = 0.5 * w * val;
            auto iu = idx_u.find(col);
            if (iu != idx_u.end()) M(r, iu->second) += e;
            auto ic = idx_c.find(col);
            if (ic != idx_c.end()) M(r, nu + ic->second) += e;
        }
        rhs(r) = -R.at(pt);
    }
    for (int r = 0; r < nc; ++r) {
        const auto& pt = act_c[r];
        double ndw = 0;
        for (int k = 0; k < b; ++k) ndw += pt.n[k] * state.omega[k];
        M(nu + r, nu + r) += -ndw + std::sqrt(static_cast<double>(pt.norm2sq_j()) + 1.0);
        const double w = wj(pt);
        for (const auto& [delta, val] : G.entries()) {
            LatticePoint col = pt - delta;
            Complex e = 0.5 * w * val;
            auto iu = idx_u.find(col);
            if (iu != idx_u.end()) M(nu + r, iu->second) += e;
            auto ic = idx_c.find(col);
            if (ic != idx_c.end()) M(nu + r, nu + ic->second) += e;
        }
        rhs(nu + r) = -std::conj(R.at(-pt));
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    Eigen::VectorXcd sol = lu.solve(rhs);
    double denom = M.cwiseAbs().maxCoeff() * sol.norm() + rhs.norm();
    if (!sol.allFinite() || (M * sol - rhs).norm() > 1e-8 * std::max(denom, 1e-300))
        throw SingularLinearization("linearized P-block solve failed (singular or ill-posed)");

    NewtonState next = state;
    next.last_step_rejected = false;
    double defect = 0;
    for (int r = 0; r < nu; ++r) {
        const auto& pt = act_u[r];
        Complex du = sol(r);
        Complex dc = sol(nu + idx_c.at(-pt));
        defect = std::max(defect, std::abs(dc - std::conj(du)));
        next.u.add(pt, 0.5 * (du + std::conj(dc)));
    }
    next.sym_defect = defect;
    double r_new = weighted_norm(residual_F(next.u, next.omega, seed, h_terms), nrm);
    if (!(r_new < state.residual_norm)) {
        NewtonState rejected = state;
        rejected.last_step_rejected = true;
        return rejected;
    }
    next.residual_norm = r_new;
    next.iterate = state.iterate + 1;
    return next;
}

std::vector<double> q_equation_update(const NewtonState& state, const LinearSeed& seed,
                                      const HTerms& h_terms, bool include_primary) {
    SpectralCoeffs V = nonlinear_part(v_of(state.u), seed, h_terms, include_primary);
    std::vector<double> omega = seed.omega0_double();
    for (int k = 0; k < seed.b(); ++k) {
        double ak = seed.amplitudes()[k];
        if (ak == 0) throw std::invalid_argument("q_equation_update: amplitudes must be nonzero");
        LatticePoint q = seed.support_point(k);
        omega[k] += wj(q) * V.at(q).real() / ak;
    }
    return omega;
}

SolutionArtifact solve(const LinearSeed& seed, const HTerms& h_terms, const SolveOptions& opt) {
    SolverBox box = opt.box;
    if (opt.auto_box) {
        double delta = seed.delta();
        int r = static_cast<int>(std::ceil(std::pow(std::abs(std::log(delta)), opt.box_exponent)));
        box.n_radius = std::max(r, 1);
        box.j_radius = r;
        for (const auto& site : seed.sites())
            for (int v : site) box.j_radius = std::max(box.j_radius, std::abs(v));
    }
    AnalyticNorm nrm(opt.rho);

    SolutionArtifact art;
    art.box = box;
    art.rho = opt.rho;

    NewtonState state = initial_state(seed, box, h_terms, nrm);
    for (int m = 1; m <= opt.max_iter; ++m) {
        NewtonState next = newton_step(state, seed, h_terms, nrm);
        if (next.last_step_rejected) {
            art.failure_reason = "newton step rejected: residual did not decrease";
            state = next;
            break;
        }
        state = next;
        state.omega = q_equation_update(state, seed, h_terms);
        state.residual_norm = weighted_norm(residual_F(state.u, state.omega, seed, h_terms), nrm);
        state.history.push_back(state.residual_norm);
        if (m == 1) art.omega_first_update = state.omega[0];
        if (state.residual_norm <= opt.tol) {
            art.converged = true;
            break;
        }
    }
    if (!art.converged && art.failure_reason.empty())
        art.failure_reason = "max iterations reached before tolerance";

    art.u = state.u;
    art.omega = state.omega;
    art.residual_norm = state.residual_norm;
    art.history = state.history;
    art.iterations = state.iterate;
    art.sym_defect = state.sym_defect;
    {
        SpectralCoeffs diff = state.u;
        diff -= seed.u0_series();
        art.remainder_norm = weighted_norm(diff, nrm);
    }
    for (int k = 0; k < seed.b(); ++k)
        art.frequency_shift.push_back(state.omega[k] - seed.omega0_double()[k]);

    // Convergence-order estimate over the usable tail of the history.
    std::vector<double> usable;
    for (double r : art.history)
        if (r > opt.history_floor) usable.push_back(r);
    if (usable.size() >= 3) {
        double r0 = usable[usable.size() - 3], r1 = usable[usable.size() - 2], r2 = usable.back();
        art.convergence_order = std::log(r2 / r1) / std::log(r1 / r0);
    } else if (usable.size() == 2 && usable[0] < 1 && usable[1] < 1) {
        art.convergence_order = std::log(usable[1]) / std::log(usable[0]);
    }
    for (std::size_t i = 0; i + 1 < art.history.size(); ++i) {
        double rm = art.history[i], rn = art.history[i + 1];
        if (rm < 1e-2 && rm > 0)
            art.quadratic_constant = std::max(art.quadratic_constant, rn / (rm * rm));
    }
    return art;
}

TransversalityReport transversality(const LinearSeed& seed_template, const HTerms& h_terms,
                                    const std::vector<double>& delta_grid, double fd_step_rel) {
    const int b = seed_template.b();
    TransversalityReport rep;
    rep.note =
        "jacobian in rescaled amplitudes a/delta; the raw-amplitude determinant scales with one "
        "power of delta less per frequency";

    auto omega1_at = [&](const std::vector<double>& a) {
        LinearSeed s = seed_template.with_amplitudes(a);
        NewtonState st;
        st.u = s.u0_series();
        st.omega = s.omega0_double();
        return q_equation_update(st, s, h_terms);
    };

    double amax = seed_template.delta();
    std::vector<double> profile = seed_template.amplitudes();
    for (auto& x : profile) x /= amax;

    for (double delta : delta_grid) {
        std::vector<double> base(b);
        for (int k = 0; k < b; ++k) base[k] = delta * profile[k];

        // Health check: one full alternation step must converge at this delta.
        {
            LinearSeed s = seed_template.with_amplitudes(base);
            SolverBox box{8, std::max(8, 2 * s.p())};
            for (const auto& site : s.sites())
                for (int v : site) box.j_radius = std::max(box.j_radius, std::abs(v) * (s.p() + 1));
            AnalyticNorm nrm;
            NewtonState st = initial_state(s, box, h_terms, nrm);
            NewtonState next = newton_step(st, s, h_terms, nrm);
            if (next.last_step_rejected)
                throw SingularLinearization("transversality: alternation step failed to converge");
        }

        Eigen::MatrixXd J(b, b);
        for (int l = 0; l < b; ++l) {
            double h = fd_step_rel * base[l];
            std::vector<double> ap = base, am = base;
            ap[l] += h;
            am[l] -= h;
            auto wp = omega1_at(ap), wm = omega1_at(am);
            for (int k = 0; k < b; ++k) J(k, l) = (wp[k] - wm[k]) / (2 * h);
        }
        rep.deltas.push_back(delta);
        rep.det_unrescaled.push_back(std::abs(J.determinant()));
        rep.det_rescaled.push_back(std::abs((J * delta).determinant()));
        std::vector<std::vector<double>> jac(b, std::vector<double>(b));
        for (int r = 0; r < b; ++r)
            for (int c = 0; c < b; ++c) jac[r][c] = J(r, c);
        rep.jacobians.push_back(std::move(jac));
    }

    if (delta_grid.size() >= 2) {
        std::vector<double> lx, ly_r, ly_u;
        for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
            lx.push_back(std::log(rep.deltas[i]));
            ly_r.push_back(std::log(rep.det_rescaled[i]));
            ly_u.push_back(std::log(rep.det_unrescaled[i]));
        }
        rep.slope_rescaled = fit_slope(lx, ly_r);
        rep.slope_unrescaled = fit_slope(lx, ly_u);
    }
    return rep;
}

double synthesis_residual(const SolutionArtifact& artifact, const LinearSeed& seed,
                          const HTerms& h_terms, int grid) {
    const int b = seed.b(), d = seed.d(), p = seed.p();
    const int axes = b + d;
    std::vector<int> g(axes, 0);
    const double step = 2.0 * M_PI / grid;

    double worst = 0;
    std::vector<double> phases(axes);
    while (true) {
        for (int i = 0; i < axes; ++i) phases[i] = g[i] * step;
        double v = 0, lin = 0;
        for (const auto& [pt, val] : artifact.u.entries()) {
            double ang = 0;
            for (int k = 0; k < b; ++k) ang += pt.n[k] * phases[k];
            for (int i = 0; i < d; ++i) ang += pt.j[i] * phases[b + i];
            Complex e = val * Complex(std::cos(ang), std::sin(ang));
            double ndw = 0;
            for (int k = 0; k < b; ++k) ndw += pt.n[k] * artifact.omega[k];
            v += e.real();
            lin += ((pt.norm2sq_j() + 1.0) - ndw * ndw) * e.real();
        }
        double nl = std::pow(v, p + 1);
        for (const auto& term : h_terms) {
            double alpha = 0;
            for (const auto& [pt, val] : term.alpha.entries()) {
                double ang = 0;
                for (int i = 0; i < d; ++i) ang += pt.j[i] * phases[b + i];
                alpha += (val * Complex(std::cos(ang), std::sin(ang))).real();
            }
            nl += alpha * std::pow(v, p + term.m);
        }
        worst = std::max(worst, std::abs(lin + nl));

        int k = axes - 1;
        while (k >= 0 && g[k] == grid - 1) g[k--] = 0;
        if (k < 0) break;
        ++g[k];
    }
    return worst;
}

nlohmann::ordered_json SolutionArtifact::to_json() const {
    nlohmann::ordered_json out;
    out["u"] = u.to_json();
    out["omega"] = omega;
    out["residual_norm"] = residual_norm;
    out["remainder_norm"] = remainder_norm;
    out["converged"] = converged;
    out["failure_reason"] = failure_reason;
    out["iterations"] = iterations;
    out["history"] = history;
    out["omega_first_update"] = omega_first_update;
    out["convergence_order"] = convergence_order;
    out["quadratic_constant"] = quadratic_constant;
    out["sym_defect"] = sym_defect;
    out["frequency_shift"] = frequency_shift;
    out["box"] = {{"n_radius", box.n_radius}, {"j_radius", box.j_radius}};
    out["rho"] = rho;
    return out;
}

SolutionArtifact SolutionArtifact::from_json(const nlohmann::json& j) {
    SolutionArtifact art;
    art.u = SpectralCoeffs::from_json(j.at("u"));
    art.omega = j.at("omega").get<std::vector<double>>();
    art.residual_norm = j.at("residual_norm").get<double>();
    art.remainder_norm = j.at("remainder_norm").get<double>();
    art.converged = j.at("converged").get<bool>();
    art.failure_reason = j.at("failure_reason").get<std::string>();
    art.iterations = j.at("iterations").get<int>();
    art.history = j.at("history").get<std::vector<double>>();
    art.omega_first_update = j.at("omega_first_update").get<double>();
    art.convergence_order = j.at("convergence_order").get<double>();
    art.quadratic_constant = j.at("quadratic_constant").get<double>();
    art.sym_defect = j.at("sym_defect").get<double>();
    art.frequency_shift = j.at("frequency_shift").get<std::vector<double>>();
    art.box.n_radius = j.at("box").at("n_radius").get<int>();
    art.box.j_radius = j.at("box").at("j_radius").get<int>();
    art.rho = j.at("rho").get<double>();
    return art;
}

nlohmann::ordered_json TransversalityReport::to_json() const {
    nlohmann::ordered_json out;
    out["deltas"] = deltas;
    out["det_rescaled"] = det_rescaled;
    out["det_unrescaled"] = det_unrescaled;
    out["slope_rescaled"] = slope_rescaled;
    out["slope_unrescaled"] = slope_unrescaled;
    out["jacobians"] = jacobians;
    out["note"] = note;
    return out;
}

}  // namespace hyperwave
