#include "ipm1d/solver.hpp"

#include "ipm1d/format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ipm1d {

namespace {

constexpr double kPi = std::numbers::pi;

bool all_finite(const GridFunction& g) {
    return std::all_of(g.samples().begin(), g.samples().end(),
                       [](double v) { return std::isfinite(v); });
}

double mass(const GridFunction& g) {
    double m = 0.0;
    for (double v : g.samples()) {
        m += v;
    }
    return m * g.dx();
}

Spectrum axpy(const Spectrum& x, double a, const Spectrum& y) {
    Spectrum out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        out[k] = x[k] + a * y[k];
    }
    return out;
}

} // namespace

std::string to_string(StopReason r) {
    switch (r) {
    case StopReason::None:
        return "";
    case StopReason::MaxTime:
        return "max-time";
    case StopReason::DtFloor:
        return "dt-floor";
    case StopReason::TailThreshold:
        return "tail-threshold";
    case StopReason::NonFinite:
        return "nan";
    }
    return "unknown";
}

void SimConfig::validate() const {
    try {
        // g = 0 switches the transport off; the transform itself needs g > 0.
        TransformParams p = params;
        if (p.g == 0.0) {
            p.g = 1.0;
        }
        p.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    if (sign != 1 && sign != -1) {
        throw ConfigError("sign must be +1 or -1");
    }
    if (gamma && !(*gamma > 0.0 && *gamma < 0.5)) {
        throw ConfigError("dissipation order gamma must lie in (0, 1/2)");
    }
    if (!(cfl > 0.0 && cfl <= 1.0)) {
        throw ConfigError("cfl number must lie in (0, 1]");
    }
    if (!(dt_floor > 0.0)) {
        throw ConfigError("dt floor must be positive");
    }
    if (!(max_dt > 0.0) || !(max_time > 0.0)) {
        throw ConfigError("max-dt and max-time must be positive");
    }
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) {
        throw ConfigError("dealias fraction must lie in (0, 1]");
    }
    if (!(tail_threshold > 0.0)) {
        throw ConfigError("spectral tail threshold must be positive");
    }
    if (!(half_width > 0.0) || !is_power_of_two(resolution) || resolution < 16) {
        throw ConfigError("grid needs a positive half-width and a power-of-two resolution >= 16");
    }
    if (!initial.eval) {
        throw ConfigError("no initial data");
    }
}

Solver::Solver(SimConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      table_(cfg_.half_width, cfg_.resolution, cfg_.params.a) {
    const int nyq = cfg_.resolution / 2;
    xi_.resize(nyq + 1);
    for (int k = 0; k <= nyq; ++k) {
        xi_[k] = k / (2.0 * cfg_.half_width);
    }
    cutoff_ = static_cast<int>(std::floor(cfg_.dealias_fraction * nyq));
}

GridFunction Solver::velocity(const GridFunction& rho) const {
    Spectrum s = rho.spectrum();
    table_.apply(s);
    GridFunction u = GridFunction::from_spectrum(cfg_.half_width, cfg_.resolution, s);
    table_.remove_images(rho, u);
    return cfg_.params.g * std::move(u);
}

double Solver::tail_energy(const GridFunction& rho) const {
    const Spectrum s = rho.spectrum();
    const int lo = static_cast<int>(std::floor(0.9 * cutoff_));
    double tail = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double e = std::norm(s[k]);
        total += e;
        if (static_cast<int>(k) > lo && static_cast<int>(k) <= cutoff_) {
            tail += e;
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

Spectrum Solver::nonlinear(const Spectrum& rho_hat) const {
    const double L = cfg_.half_width;
    const int n = cfg_.resolution;
    const GridFunction rho = GridFunction::from_spectrum(L, n, rho_hat);
    const GridFunction u = velocity(rho);
    Spectrum d = rho_hat;
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] *= std::complex<double>(0.0, 2.0 * kPi * xi_[k]);
    }
    d.back() = 0.0;
    const GridFunction rx = GridFunction::from_spectrum(L, n, d);
    GridFunction prod(L, n);
    for (int j = 0; j < n; ++j) {
        prod.samples()[j] = u[j] * rx[j];
    }
    Spectrum out = prod.spectrum();
    const double s = -static_cast<double>(cfg_.sign);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = static_cast<int>(k) > cutoff_ ? 0.0 : s * out[k];
    }
    return out;
}

SimState Solver::initialize() const {
    SimState s;
    s.rho = GridFunction::sample(cfg_.initial.eval, cfg_.half_width, cfg_.resolution);
    if (!all_finite(s.rho)) {
        throw ConfigError("initial data '" + cfg_.initial.id + "' is not finite on the grid");
    }
    const double edge = s.rho.edge_magnitude();
    if (edge > 1e-12 * std::max(1.0, s.rho.sup_norm())) {
        throw ConfigError("initial data '" + cfg_.initial.id + "' does not decay at the domain edge (|rho| = " +
                          fmt17(edge) + ")");
    }
    s.u = velocity(s.rho);
    s.max_gradient = derivative(s.rho).sup_norm();
    return s;
}

SimState Solver::step(const SimState& s, double until) const {
    if (s.stop != StopReason::None) {
        return s;
    }
    const double dt_cfl = cfg_.cfl * s.rho.dx() / std::max(s.u.sup_norm(), 1e-12);
    if (dt_cfl < cfg_.dt_floor) {
        SimState out = s;
        out.stop = StopReason::DtFloor;
        return out;
    }
    double dt = std::min({dt_cfl, cfg_.max_dt, until - s.time});
    if (!(dt > 0.0)) {
        dt = std::min(dt_cfl, cfg_.max_dt);
    }

    // Integrating factor for the dissipation; E = exp(-|2 pi xi|^gamma dt/2).
    std::vector<double> E(xi_.size(), 1.0);
    if (cfg_.gamma) {
        for (std::size_t k = 0; k < xi_.size(); ++k) {
            E[k] = std::exp(-std::pow(2.0 * kPi * xi_[k], *cfg_.gamma) * 0.5 * dt);
        }
    }
    const auto scale = [&](const Spectrum& v) {
        Spectrum out(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) {
            out[k] = E[k] * v[k];
        }
        return out;
    };

    const Spectrum v = s.rho.spectrum();
    const Spectrum k1 = nonlinear(v);
    const Spectrum ev = scale(v);
    const Spectrum k2 = nonlinear(axpy(ev, 0.5 * dt, scale(k1)));
    const Spectrum k3 = nonlinear(axpy(ev, 0.5 * dt, k2));
    const Spectrum k4 = nonlinear(axpy(scale(ev), dt, scale(k3)));
    Spectrum next(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double e = E[k];
        next[k] = e * e * v[k] + dt / 6.0 * (e * e * k1[k] + 2.0 * e * (k2[k] + k3[k]) + k4[k]);
    }

    SimState out;
    out.rho = GridFunction::from_spectrum(cfg_.half_width, cfg_.resolution, next);
    if (!all_finite(out.rho)) {
        out = s;
        out.stop = StopReason::NonFinite;
        return out;
    }
    out.u = velocity(out.rho);
    out.time = (until - s.time - dt <= 1e-12 * std::max(1.0, until)) ? until : s.time + dt;
    out.steps = s.steps + 1;
    out.max_gradient = derivative(out.rho).sup_norm();
    out.bkm = s.bkm + 0.5 * dt * (s.max_gradient + out.max_gradient);
    if (!all_finite(out.u) || !std::isfinite(out.max_gradient)) {
        out = s;
        out.stop = StopReason::NonFinite;
    } else if (tail_energy(out.rho) > cfg_.tail_threshold) {
        out.stop = StopReason::TailThreshold;
    } else if (out.time >= cfg_.max_time) {
        out.stop = StopReason::MaxTime;
    }
    return out;
}

SimState initialize(const SimConfig& cfg) { return Solver(cfg).initialize(); }

SimState step(const SimState& s, const SimConfig& cfg) { return Solver(cfg).step(s); }

RunResult run(const SimConfig& cfg, double record_interval) {
    if (!(record_interval > 0.0)) {
        throw ConfigError("record interval must be positive");
    }
    const Solver solver(cfg);
    RunResult res;
    SimState state = solver.initialize();
    const auto record = [&](const SimState& s, double dt) {
        res.steps.push_back(
            {s.time, dt, s.rho.sup_norm(), mass(s.rho), s.max_gradient, solver.tail_energy(s.rho)});
    };
    record(state, 0.0);
    res.snapshots.push_back(state);
    long k = 1;
    while (state.stop == StopReason::None) {
        const double next_record = std::min(k * record_interval, cfg.max_time);
        SimState n = solver.step(state, next_record);
        if (n.steps != state.steps) {
            record(n, n.time - state.time);
        }
        state = std::move(n);
        if (state.time >= next_record && state.stop != StopReason::NonFinite &&
            state.stop != StopReason::DtFloor) {
            res.snapshots.push_back(state);
            ++k;
        }
    }
    SimState& last = res.snapshots.back();
    if (last.steps == state.steps) {
        last.stop = state.stop;
    } else {
        res.snapshots.push_back(state);
    }
    res.stop = state.stop;
    return res;
}

void write_snapshot(std::ostream& os, const SimState& s) {
    const GridFunction d = derivative(s.rho);
    os << "t,x,rho,u,drho_dx\n";
    const std::string t = fmt17(s.time);
    for (int j = 0; j < s.rho.size(); ++j) {
        os << t << ',' << fmt17(s.rho.x(j)) << ',' << fmt17(s.rho[j]) << ',' << fmt17(s.u[j]) << ','
           << fmt17(d[j]) << '\n';
    }
}

} // namespace ipm1d
