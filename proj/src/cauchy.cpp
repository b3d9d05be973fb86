#include "hyperwave/cauchy.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace hyperwave {

namespace {

int pow_int(int base, int e) {
    int r = 1;
    while (e-- > 0) r *= base;
    return r;
}

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

}  // namespace

double default_dt(double delta) { return delta > 0 ? std::min(0.01, 0.1 / std::sqrt(delta)) : 0.01; }

struct CauchySimulator::Fft {
    fftw_plan forward = nullptr, backward = nullptr;
    fftw_complex* buf = nullptr;
    int size = 0;

    Fft(int d, int P) {
        size = pow_int(P, d);
        buf = fftw_alloc_complex(size);
        std::vector<int> dims(d, P);
        backward = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        forward = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~Fft() {
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(buf);
    }
};

CauchySimulator::CauchySimulator(const CauchyParams& params, std::vector<Complex> u_hat)
    : params_(params), M_(params.grid) {
    if (params_.d < 1 || params_.d > 3) throw std::invalid_argument("cauchy: d must be 1..3");
    if (M_ < 8) throw std::invalid_argument("cauchy: grid too small");
    if (static_cast<int>(u_hat.size()) != pow_int(M_, params_.d))
        throw std::invalid_argument("cauchy: data size must be grid^d");
    K_ = M_ / 3;
    int need = (params_.p + 2) * K_ + 1;
    P_ = std::max(M_, need);
    if (P_ % 16) P_ += 16 - P_ % 16;
    fft_ = std::make_unique<Fft>(params_.d, P_);

    u_ = std::move(u_hat);
    const int n = static_cast<int>(u_.size());
    freq_.resize(n);
    knorm1_.resize(n);
    for (int idx = 0; idx < n; ++idx) {
        int rem = idx;
        long k2 = 0;
        int k1 = 0;
        bool retained = true;
        for (int ax = params_.d - 1; ax >= 0; --ax) {
            int ki = rem % M_;
            rem /= M_;
            int mode = ki >= (M_ + 1) / 2 ? ki - M_ : ki;
            k2 += static_cast<long>(mode) * mode;
            k1 += std::abs(mode);
            if (std::abs(mode) > K_) retained = false;
        }
        freq_[idx] = std::sqrt(static_cast<double>(k2) + 1.0);
        knorm1_[idx] = k1;
        if (!retained) u_[idx] = 0.0;  // the state lives in the dealiased ball
    }
}

CauchySimulator::~CauchySimulator() = default;

std::vector<Complex> CauchySimulator::seed_data(const CauchyParams& params, const LinearSeed& seed,
                                                double perturb_amp, int perturb_modes,
                                                std::uint64_t rng_seed) {
    if (seed.d() != params.d) throw std::invalid_argument("cauchy seed data: dimension mismatch");
    const int M = params.grid;
    std::vector<Complex> u(pow_int(M, params.d), Complex(0, 0));
    auto index_of = [&](const std::vector<int>& mode) {
        int idx = 0;
        for (int ax = 0; ax < params.d; ++ax) idx = idx * M + ((mode[ax] % M) + M) % M;
        return idx;
    };
    for (int k = 0; k < seed.b(); ++k) u[index_of(seed.sites()[k])] += seed.amplitudes()[k];
    if (perturb_amp > 0 && perturb_modes > 0) {
        std::mt19937_64 rng(rng_seed);
        std::vector<int> mode(params.d, -perturb_modes);
        while (true) {
            double re = 2 * uniform01(rng) - 1, im = 2 * uniform01(rng) - 1;
            u[index_of(mode)] += perturb_amp * Complex(re, im);
            int ax = params.d - 1;
            while (ax >= 0 && mode[ax] == perturb_modes) mode[ax--] = -perturb_modes;
            if (ax < 0) break;
            ++mode[ax];
        }
    }
    return u;
}

std::vector<double> CauchySimulator::v_physical_padded(int /*power_needed*/) const {
    const int n = fft_->size;
    std::fill_n(reinterpret_cast<Complex*>(fft_->buf), n, Complex(0, 0));
    // Scatter v_hat(k) = (u(k) + conj(u(-k)))/2 into the padded grid.
    auto vh = v_hat();
    const int total = static_cast<int>(u_.size());
    for (int idx = 0; idx < total; ++idx) {
        if (vh[idx] == Complex(0, 0)) continue;
        int rem = idx, pidx = 0;
        for (int ax = params_.d - 1, mult = 1; ax >= 0; --ax) {
            int ki = rem % M_;
            rem /= M_;
            int mode = ki >= (M_ + 1) / 2 ? ki - M_ : ki;
            pidx += ((mode % P_) + P_) % P_ * mult;
            mult *= P_;
        }
        reinterpret_cast<Complex*>(fft_->buf)[pidx] = vh[idx];
    }
    fftw_execute(fft_->backward);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = reinterpret_cast<Complex*>(fft_->buf)[i].real();
    return v;
}

void CauchySimulator::kick(double dt) {
    if (params_.delta == 0) return;
    auto v = v_physical_padded(params_.p + 1);
    const int n = fft_->size;
    auto* buf = reinterpret_cast<Complex*>(fft_->buf);
    for (int i = 0; i < n; ++i) buf[i] = std::pow(v[i], params_.p + 1);
    fftw_execute(fft_->forward);
    const double scale = 1.0 / n;
    const int total = static_cast<int>(u_.size());
    for (int idx = 0; idx < total; ++idx) {
        int rem = idx, pidx = 0;
        bool retained = true;
        for (int ax = params_.d - 1, mult = 1; ax >= 0; --ax) {
            int ki = rem % M_;
            rem /= M_;
            int mode = ki >= (M_ + 1) / 2 ? ki - M_ : ki;
            if (std::abs(mode) > K_) retained = false;
            pidx += ((mode % P_) + P_) % P_ * mult;
            mult *= P_;
        }
        if (!retained) continue;
        Complex g = buf[pidx] * scale;
        u_[idx] -= Complex(0, 1) * dt * params_.delta * g / freq_[idx];
    }
}

void CauchySimulator::step(double dt) {
    const int total = static_cast<int>(u_.size());
    for (int idx = 0; idx < total; ++idx)
        u_[idx] *= std::polar(1.0, -freq_[idx] * dt / 2);
    kick(dt);
    for (int idx = 0; idx < total; ++idx)
        u_[idx] *= std::polar(1.0, -freq_[idx] * dt / 2);
    t_ += dt;
}

std::vector<Complex> CauchySimulator::v_hat() const {
    const int total = static_cast<int>(u_.size());
    std::vector<Complex> out(total);
    for (int idx = 0; idx < total; ++idx) {
        // mirror index: negate every mode component
        int rem = idx, midx = 0;
        for (int ax = params_.d - 1, mult = 1; ax >= 0; --ax) {
            int ki = rem % M_;
            rem /= M_;
            int mode = ki >= (M_ + 1) / 2 ? ki - M_ : ki;
            midx += ((-mode % M_) + M_) % M_ * mult;
            mult *= M_;
        }
        out[idx] = 0.5 * (u_[idx] + std::conj(u_[midx]));
    }
    return out;
}

std::vector<Complex> CauchySimulator::w_hat() const {
    const int total = static_cast<int>(u_.size());
    std::vector<Complex> out(total);
    for (int idx = 0; idx < total; ++idx) {
        int rem = idx, midx = 0;
        for (int ax = params_.d - 1, mult = 1; ax >= 0; --ax) {
            int ki = rem % M_;
            rem /= M_;
            int mode = ki >= (M_ + 1) / 2 ? ki - M_ : ki;
            midx += ((-mode % M_) + M_) % M_ * mult;
            mult *= M_;
        }
        out[idx] = Complex(0, 0.5) * (u_[idx] - std::conj(u_[midx]));
    }
    return out;
}

double CauchySimulator::norm_v() const {
    auto vh = v_hat();
    double s = 0;
    for (std::size_t i = 0; i < vh.size(); ++i)
        s += std::abs(vh[i]) * std::exp(params_.rho * knorm1_[i]);
    return s;
}

double CauchySimulator::norm_w() const {
    auto wh = w_hat();
    double s = 0;
    for (std::size_t i = 0; i < wh.size(); ++i)
        s += std::abs(wh[i]) * std::exp(params_.rho * knorm1_[i]);
    return s;
}

double CauchySimulator::energy() const {
    auto vh = v_hat();
    auto wh = w_hat();
    double e = 0;
    for (std::size_t i = 0; i < vh.size(); ++i) {
        double f2 = freq_[i] * freq_[i];
        e += 0.5 * f2 * (std::norm(vh[i]) + std::norm(wh[i]));
    }
    if (params_.delta != 0) {
        auto v = v_physical_padded(params_.p + 2);
        double mean = 0;
        for (double x : v) mean += std::pow(x, params_.p + 2);
        mean /= static_cast<double>(v.size());
        e += params_.delta / (params_.p + 2) * mean;
    }
    return e;
}

std::vector<double> CauchySimulator::mode_amplitudes() const {
    std::vector<double> out(u_.size());
    for (std::size_t i = 0; i < u_.size(); ++i) out[i] = std::abs(u_[i]);
    return out;
}

double CauchySimulator::conj_symmetry_defect() const {
    auto vh = v_hat();
    double worst = 0;
    const int total = static_cast<int>(u_.size());
    for (int idx = 0; idx < total; ++idx) {
        int rem = idx, midx = 0;
        for (int ax = params_.d - 1, mult = 1; ax >= 0; --ax) {
            int ki = rem % M_;
            rem /= M_;
            int mode = ki >= (M_ + 1) / 2 ? ki - M_ : ki;
            midx += ((-mode % M_) + M_) % M_ * mult;
            mult *= M_;
        }
        worst = std::max(worst, std::abs(vh[midx] - std::conj(vh[idx])));
    }
    return worst;
}

bool CauchySimulator::blown_up() const {
    for (const auto& z : u_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return true;
        if (std::abs(z) > params_.blowup_threshold) return true;
    }
    return false;
}

LifetimeReport lifetime_run(CauchySimulator& sim, double T, double A, double excess_K,
                            int checkpoints) {
    LifetimeReport rep;
    rep.T = T;
    rep.A = A;
    rep.dt = sim.params().dt;
    rep.delta = sim.params().delta;
    rep.pass_threshold = excess_K * sim.params().delta;
    if (rep.dt <= 0) throw std::invalid_argument("lifetime_run: dt must be positive");

    const long steps = std::max(1L, static_cast<long>(std::ceil(T / rep.dt)));
    const long stride = std::max(1L, steps / std::max(1, checkpoints));

    const auto amps0 = sim.mode_amplitudes();
    const double e0 = sim.energy();
    rep.s0 = sim.norm_v() + sim.norm_w();
    rep.rows.push_back({0.0, sim.norm_v(), sim.norm_w(), 0.0, 0.0});

    for (long s = 1; s <= steps; ++s) {
        sim.step(rep.dt);
        if (sim.blown_up()) {
            rep.blew_up = true;
            rep.blowup_time = sim.t();
            break;
        }
        double nv = sim.norm_v(), nw = sim.norm_w();
        double excess = nv + nw - rep.s0;
        rep.max_excess = std::max(rep.max_excess, excess);
        double drift = e0 != 0 ? std::abs(sim.energy() - e0) / std::abs(e0) : std::abs(sim.energy());
        rep.max_energy_drift = std::max(rep.max_energy_drift, drift);
        auto amps = sim.mode_amplitudes();
        for (std::size_t i = 0; i < amps.size(); ++i)
            rep.max_amp_drift = std::max(rep.max_amp_drift, std::abs(amps[i] - amps0[i]));
        if (s % stride == 0 || s == steps)
            rep.rows.push_back({sim.t(), nv, nw, excess, drift});
    }
    rep.pass = !rep.blew_up &&
               (rep.delta > 0 ? rep.max_excess <= rep.pass_threshold : rep.max_excess <= 1e-10);
    return rep;
}

std::string LifetimeReport::to_csv() const {
    std::ostringstream os;
    os << "t,norm_v,norm_vt,excess,energy_drift\n";
    char line[256];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.norm_v, r.norm_w,
                      r.excess, r.energy_drift);
        os << line;
    }
    return os.str();
}

nlohmann::ordered_json LifetimeReport::to_json() const {
    nlohmann::ordered_json out;
    out["T"] = T;
    out["A"] = A;
    out["dt"] = dt;
    out["delta"] = delta;
    out["s0"] = s0;
    out["max_excess"] = max_excess;
    out["pass_threshold"] = pass_threshold;
    out["pass"] = pass;
    out["blew_up"] = blew_up;
    out["blowup_time"] = blowup_time;
    out["max_energy_drift"] = max_energy_drift;
    out["max_amp_drift"] = max_amp_drift;
    out["checkpoints"] = rows.size();
    return out;
}

std::vector<ComparisonRow> compare_generic_vs_tuned(const std::vector<LinearSeed>& seeds,
                                                    const CauchyParams& params, double A,
                                                    double excess_K) {
    std::vector<ComparisonRow> table;
    for (const auto& seed : seeds) {
        ComparisonRow row;
        std::ostringstream label;
        label << "b=" << seed.b() << " d=" << seed.d() << " p=" << seed.p() << " sites=";
        for (const auto& site : seed.sites()) {
            label << "(";
            for (std::size_t i = 0; i < site.size(); ++i) label << (i ? "," : "") << site[i];
            label << ")";
        }
        row.label = label.str();
        GenericityCertificate cert = certify(seed);
        row.certificate = cert.holds() ? "yes" : (cert.refuted() ? "refuted" : "partially-verified");

        CauchySimulator sim(params, CauchySimulator::seed_data(params, seed));
        double T = params.delta > 0 ? std::pow(params.delta, -A) : 100.0;
        LifetimeReport rep = lifetime_run(sim, T, A, excess_K);
        row.max_excess = rep.max_excess;
        row.blew_up = rep.blew_up;
        row.blowup_time = rep.blowup_time;
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace hyperwave
