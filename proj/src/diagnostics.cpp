#include "ipm1d/diagnostics.hpp"

#include "ipm1d/format.hpp"
#include "ipm1d/inequalities.hpp"
#include "ipm1d/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace ipm1d {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 4> kGlNodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                         0.9602898564975363};
constexpr std::array<double, 4> kGlWeights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                           0.1012285362903763};

void check_unit_interval(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
        throw ParameterError(std::string(name) + " must lie in (0, 1)");
    }
}

// Integral over [0, inf) of w(x) G(x), G(x) = s (rho(x) - rho(0)) from the x >= 0 samples.
struct HalfLineWeight {
    std::function<double(double)> w;
    // int_0^h x^(2k) w(x) dx for k = 1, 2, 3
    std::function<double(int, double)> moment;
    // int_L^inf w(x) dx
    std::function<double(double)> tail;
    double kink = -1.0;
};

double grid_functional(const GridFunction& rho, double s, const HalfLineWeight& wt) {
    const int n = rho.size();
    const int o = rho.origin();
    const double h = rho.dx();
    const double r0 = rho[o];
    const auto G = [&](int j) { return s * (rho[((o + j) % n + n) % n] - r0); };
    const int m = n / 2; // x_m = L (periodic image of -L)

    // [0, h]: G = A x^2 + B x^4 / h^2 + C x^6 / h^4 through the first three nodes.
    const double q1 = G(1) / (h * h);
    const double q2 = G(2) / (4.0 * h * h);
    const double q3 = G(3) / (9.0 * h * h);
    const double A = 1.5 * q1 - 0.6 * q2 + 0.1 * q3;
    const double B = -13.0 / 24.0 * q1 + 2.0 / 3.0 * q2 - 0.125 * q3;
    const double C = q1 / 24.0 - q2 / 15.0 + q3 / 40.0;
    double total = A * wt.moment(1, h) + B * wt.moment(2, h) / (h * h) + C * wt.moment(3, h) / (h * h * h * h);

    const auto gl = [&](double lo, double hi, const std::array<double, 4>& g, double x0) {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (double sgn : {-1.0, 1.0}) {
                const double x = mid + sgn * half * kGlNodes[i];
                const double t = (x - x0) / h; // in [0, 1]
                // cubic Lagrange through t = -1, 0, 1, 2
                const double l0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
                const double l1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
                const double l2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
                const double l3 = (t + 1.0) * t * (t - 1.0) / 6.0;
                acc += kGlWeights[i] * wt.w(x) * (l0 * g[0] + l1 * g[1] + l2 * g[2] + l3 * g[3]);
            }
        }
        return acc * half;
    };
    for (int j = 1; j < m; ++j) {
        const double lo = j * h;
        const double hi = (j + 1) * h;
        const std::array<double, 4> g{G(j - 1), G(j), G(j + 1), G(j + 2)};
        if (wt.kink > lo && wt.kink < hi) {
            total += gl(lo, wt.kink, g, lo) + gl(wt.kink, hi, g, lo);
        } else {
            total += gl(lo, hi, g, lo);
        }
    }
    total += s * (rho[0] - r0) * wt.tail(m * h);
    return total;
}

HalfLineWeight power_weight(double sigma) {
    const double b = 1.0 + sigma;
    return {[b](double x) { return std::pow(x, -b); },
            [b](int k, double h) { return std::pow(h, 2 * k + 1 - b) / (2 * k + 1 - b); },
            [sigma](double L) { return std::pow(L, -sigma) / sigma; }, -1.0};
}

HalfLineWeight exp_weight() {
    return {[](double x) { return std::exp(-x) / x; },
            [](int k, double h) {
                // int_0^h x^(2k-1) e^-x dx = (2k-1)! P(2k, h)
                const int p = 2 * k;
                double term = 1.0;
                double sum = 1.0;
                for (int i = 1; i < p; ++i) {
                    term *= h / i;
                    sum += term;
                }
                double fact = 1.0;
                for (int i = 2; i < p; ++i) {
                    fact *= i;
                }
                if (h < 1.0) {
                    double acc = 0.0;
                    double t = std::pow(h, p) / p;
                    for (int i = 0; i < 60; ++i) {
                        acc += t;
                        t *= -h * (p + i) / ((i + 1.0) * (p + i + 1));
                    }
                    return acc;
                }
                return fact * (1.0 - std::exp(-h) * sum);
            },
            [](double L) { return -std::expint(-L); }, -1.0};
}

HalfLineWeight eta_weight(double alpha) {
    return {[alpha](double x) { return x < 1.0 ? std::pow(x, -alpha) : std::pow(x, -4.0 - alpha); },
            [alpha](int k, double h) {
                if (h > 1.0) {
                    throw ParameterError("grid spacing above 1 is too coarse for the eta functional");
                }
                return std::pow(h, 2 * k + 1 - alpha) / (2 * k + 1 - alpha);
            },
            [alpha](double L) { return std::pow(L, -3.0 - alpha) / (3.0 + alpha); }, 1.0};
}

quad::QuadratureSpec oracle_spec() {
    quad::QuadratureSpec q;
    q.abs_tol = 1e-13;
    q.rel_tol = 1e-11;
    return q;
}

double profile_functional(const TestFunction& f, double s, const quad::Weight& w) {
    const double f0 = f.eval(0.0);
    const auto g = [&](double x) { return s * (f.eval(x) - f0); };
    return quad::integrate_weighted_halfline(g, w, oracle_spec()).value;
}

} // namespace

double compute_J(const GridFunction& rho, double sigma) {
    check_unit_interval(sigma, "sigma");
    return grid_functional(rho, -1.0, power_weight(sigma));
}

double compute_Jtilde(const GridFunction& rho) { return grid_functional(rho, 1.0, exp_weight()); }

double compute_F(const GridFunction& rho, double alpha) {
    check_unit_interval(alpha, "alpha");
    return grid_functional(rho, -1.0, eta_weight(alpha));
}

double compute_J(const TestFunction& f, double sigma) {
    check_unit_interval(sigma, "sigma");
    return profile_functional(f, -1.0, quad::Weight::power(1.0 + sigma));
}

double compute_Jtilde(const TestFunction& f) { return profile_functional(f, 1.0, quad::Weight::exp_over_x()); }

double compute_F(const TestFunction& f, double alpha) {
    check_unit_interval(alpha, "alpha");
    return profile_functional(f, -1.0, quad::Weight::eta(alpha));
}

namespace {

// (sqrt(pi) s/2) e^(s^2/4) erfc(s/2)
double dip_kernel(double s) {
    const double z = 0.5 * s;
    if (z < 20.0) {
        return std::sqrt(kPi) * z * std::exp(z * z) * std::erfc(z);
    }
    const double r = 1.0 / (2.0 * z * z);
    return 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r * (1.0 - 9.0 * r))));
}

} // namespace

double gaussian_dip_Jtilde(double w) {
    if (!(w > 0.0) || !std::isfinite(w)) {
        throw ParameterError("width must be positive");
    }
    const auto q = oracle_spec();
    const auto far = [](double s) { return (1.0 - dip_kernel(s)) / s; };
    if (w >= 1.0) {
        return quad::integrate_adaptive(far, w, std::numeric_limits<double>::infinity(), q).value;
    }
    // int_w^1 (1 - M)/s = log(1/w) - int_w^1 M/s; M(s)/s is bounded near 0.
    const auto near = [](double s) { return s > 0.0 ? dip_kernel(s) / s : 0.5 * std::sqrt(kPi); };
    return -std::log(w) - quad::integrate_adaptive(near, w, 1.0, q).value +
           quad::integrate_adaptive(far, 1.0, std::numeric_limits<double>::infinity(), q).value;
}

double gaussian_dip_width(double target) {
    if (!(target > 0.0) || !std::isfinite(target)) {
        throw ParameterError("target must be positive");
    }
    // decreasing in w; bisect in log w
    double lo = -800.0;
    double hi = 20.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (gaussian_dip_Jtilde(std::exp(mid)) > target ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double telescoping_phi(double x, double alpha) {
    if (x < 1.0) {
        return 1.0 / (3.0 + alpha) + (1.0 - std::pow(x, 1.0 - alpha)) / (1.0 - alpha);
    }
    return std::pow(x, -3.0 - alpha) / (3.0 + alpha);
}

DyadicSum dyadic_series_constant(double a, double alpha, int terms) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ParameterError("a must be positive");
    }
    check_unit_interval(alpha, "alpha");
    if (terms < 1) {
        throw ParameterError("need at least one term");
    }
    const double a2 = a * a;
    const double first = 32.0 / (1.0 - std::pow(2.0, -alpha)) /
                         ((1.0 - alpha) * (1.0 - alpha) * (3.0 + alpha) * (3.0 + alpha) *
                          std::log((9.0 + 9.0 * a2) / (9.0 + a2)));
    const double pre = std::pow(2.0, 5.0 + alpha) / ((3.0 + alpha) * (3.0 + alpha));
    const auto term = [&](int k) {
        const double four = std::ldexp(1.0, 2 * k);
        const double eps = 8.0 * a2 / (9.0 * four + a2);
        return std::pow(2.0, -(2.0 + alpha) * k) / std::log1p(eps);
    };

    DyadicSum out;
    out.terms = terms;
    double partial = 0.0;
    for (int k = 0; k < terms; ++k) {
        partial += term(k);
    }
    out.ratio = term(terms) / term(terms - 1);

    // Remainder over k >= K with 1/log(1+e) in [1/e + 1/2 - e/12, 1/e + 1/2].
    const int K = terms;
    const double upper = 9.0 / (8.0 * a2) * std::pow(2.0, -alpha * K) / (1.0 - std::pow(2.0, -alpha)) +
                         0.625 * std::pow(2.0, -(2.0 + alpha) * K) / (1.0 - std::pow(2.0, -(2.0 + alpha)));
    const double width = 2.0 * a2 / 27.0 * std::pow(2.0, -(4.0 + alpha) * K) / (1.0 - std::pow(2.0, -(4.0 + alpha)));
    out.partial = first + pre * partial;
    out.value = out.partial + pre * (upper - 0.5 * width);
    out.tail_bound = pre * 0.5 * width;
    out.omitted_upper = pre * upper;
    return out;
}

std::string to_string(Criterion c) {
    switch (c) {
    case Criterion::Monotone:
        return "monotone";
    case Criterion::NonMonotone:
        return "exponential";
    case Criterion::Telescoping:
        return "telescoping";
    }
    return "unknown";
}

Criterion parse_criterion(const std::string& name) {
    if (name == "monotone") {
        return Criterion::Monotone;
    }
    if (name == "exponential") {
        return Criterion::NonMonotone;
    }
    if (name == "telescoping") {
        return Criterion::Telescoping;
    }
    throw ParameterError("unknown blow-up criterion '" + name + "' (monotone, exponential, telescoping)");
}

std::optional<double> riccati_escape_time(double c1, double c2, double y0) {
    if (!(c1 > 0.0) || !(y0 > 0.0)) {
        return std::nullopt;
    }
    if (c2 <= 0.0) {
        return 1.0 / (c1 * y0);
    }
    const double r1 = std::sqrt(c1) * y0;
    const double r2 = std::sqrt(c2);
    if (!(r1 > r2)) {
        return std::nullopt;
    }
    return std::log((r1 + r2) / (r1 - r2)) / (2.0 * std::sqrt(c1 * c2));
}

double riccati_solution(double c1, double c2, double y0, double t) {
    if (c1 == 0.0) {
        return y0 - c2 * t;
    }
    if (c2 <= 0.0) {
        const double d = 1.0 - c1 * y0 * t;
        return d > 0.0 ? y0 / d : std::numeric_limits<double>::infinity();
    }
    const double r = std::sqrt(c2 / c1);
    const double k = std::sqrt(c1 * c2);
    const double C = (y0 - r) / (y0 + r);
    const double e = C * std::exp(2.0 * k * t);
    if (e >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return r * (1.0 + e) / (1.0 - e);
}

BlowupPrediction predict_blowup(const GridFunction& rho0, const SimConfig& cfg, Criterion criterion,
                                double parameter) {
    const double a = cfg.params.a;
    const double g = cfg.params.g;
    const double sup = rho0.sup_norm();
    const bool minus = criterion != Criterion::NonMonotone;
    if ((minus && cfg.sign != -1) || (!minus && cfg.sign != 1)) {
        throw ConfigError("criterion '" + to_string(criterion) + "' needs the " + (minus ? "minus" : "plus") +
                          "-sign model");
    }
    BlowupPrediction p;
    p.criterion = criterion;
    p.parameter = parameter;
    switch (criterion) {
    case Criterion::Monotone: {
        const double s = parameter;
        check_unit_interval(s, "sigma");
        p.initial = compute_J(rho0, s);
        p.threshold = 2.0 * std::numbers::sqrt2 / s * sup;
        const double C = ConstantCatalog::C_a_sigma(a, s);
        const double d = 1.0 - s + (3.0 - s) * a * a;
        p.c1 = g * (1.0 - s) * (3.0 - s) * C / (2.0 * d);
        p.c2 = 4.0 * g * (1.0 - s) * (3.0 - s) * C / (d * s * s) * sup * sup;
        break;
    }
    case Criterion::NonMonotone:
        p.initial = compute_Jtilde(rho0);
        p.threshold = std::sqrt((3.0 + 4719.0 * a * a) * (1.0 + 2.0 * a * a)) * sup;
        p.c1 = 2.0 * a * a * g / ((1.0 + 2.0 * a * a) * kPi);
        p.c2 = 2.0 * g / kPi * (4719.0 + 3.0 / (a * a)) * sup * sup;
        break;
    case Criterion::Telescoping: {
        check_unit_interval(parameter, "alpha");
        p.initial = compute_F(rho0, parameter);
        p.threshold = 0.0;
        const double c = dyadic_series_constant(a, parameter, 60).value;
        p.c1 = g / (4.0 * kPi * c);
        p.c2 = 0.0;
        break;
    }
    }
    // Below ~1e-12 relative the functional is rounding noise of a constant profile.
    const double noise = 1e-12 * std::max(sup, std::numeric_limits<double>::min());
    p.hypothesis_met = sup > 0.0 && p.initial > p.threshold + noise;
    if (p.hypothesis_met) {
        p.predicted_time = riccati_escape_time(p.c1, p.c2, p.initial);
        if (!p.predicted_time) {
            p.note = "hypothesis met but sqrt(c1) y0 <= sqrt(c2); comparison ODE does not escape";
        }
    } else {
        p.note = "hypothesis not met";
    }
    return p;
}

DiagnosticSeries evaluate_series(const std::vector<SimState>& snapshots, double sigma, double alpha) {
    DiagnosticSeries out;
    out.sigma = sigma;
    out.alpha = alpha;
    for (const SimState& s : snapshots) {
        out.records.push_back({s.time, compute_J(s.rho, sigma), compute_Jtilde(s.rho), compute_F(s.rho, alpha),
                               s.bkm, s.rho.sup_norm(), s.max_gradient});
    }
    if (!snapshots.empty()) {
        out.stop_reason = to_string(snapshots.back().stop);
    }
    return out;
}

namespace {

double functional_of(const FunctionalRecord& r, Criterion c) {
    switch (c) {
    case Criterion::Monotone:
        return r.J;
    case Criterion::NonMonotone:
        return r.Jtilde;
    case Criterion::Telescoping:
        return r.F;
    }
    return 0.0;
}

} // namespace

EnvelopeReport envelope_compare(const DiagnosticSeries& series, const BlowupPrediction& prediction, double band) {
    EnvelopeReport rep;
    rep.band = band;
    if (!prediction.hypothesis_met) {
        rep.note = "hypothesis not met; comparison reported only";
    }
    if (series.records.empty()) {
        rep.note = "empty series";
        return rep;
    }
    const FunctionalRecord& first = series.records.front();
    const double y0 = functional_of(first, prediction.criterion);
    for (const FunctionalRecord& r : series.records) {
        const double env = riccati_solution(prediction.c1, prediction.c2, y0, r.time - first.time);
        const double y = functional_of(r, prediction.criterion);
        ++rep.points;
        if (!(y >= env - band * std::abs(env))) {
            ++rep.violations;
            if (!rep.first_violation) {
                rep.first_violation = r.time;
            }
        }
    }
    rep.checked = prediction.hypothesis_met;
    return rep;
}

EnvelopeReport ode_consistency(const DiagnosticSeries& series, const BlowupPrediction& prediction, double band) {
    EnvelopeReport rep;
    rep.band = band;
    if (!prediction.hypothesis_met) {
        rep.note = "hypothesis not met; comparison reported only";
    }
    const auto& rs = series.records;
    if (rs.size() < 3) {
        rep.note = "fewer than three records";
        return rep;
    }
    for (std::size_t i = 1; i + 1 < rs.size(); ++i) {
        const double dt = rs[i + 1].time - rs[i - 1].time;
        if (!(dt > 0.0)) {
            continue;
        }
        const double dy = (functional_of(rs[i + 1], prediction.criterion) -
                           functional_of(rs[i - 1], prediction.criterion)) /
                          dt;
        const double y = functional_of(rs[i], prediction.criterion);
        const double bound = prediction.c1 * y * y - prediction.c2;
        ++rep.points;
        if (!(dy >= bound - band * std::abs(bound))) {
            ++rep.violations;
            if (!rep.first_violation) {
                rep.first_violation = rs[i].time;
            }
        }
    }
    rep.checked = prediction.hypothesis_met && rep.points > 0;
    return rep;
}

void write_series(std::ostream& os, const DiagnosticSeries& s) {
    os << "t,J,Jtilde,F,bkm,sup_norm,max_gradient\n";
    for (const FunctionalRecord& r : s.records) {
        os << fmt17(r.time) << ',' << fmt17(r.J) << ',' << fmt17(r.Jtilde) << ',' << fmt17(r.F) << ','
           << fmt17(r.bkm) << ',' << fmt17(r.sup_norm) << ',' << fmt17(r.max_gradient) << '\n';
    }
}

void write_prediction(std::ostream& os, const BlowupPrediction& p) {
    os << "key,value\n";
    os << "criterion," << to_string(p.criterion) << '\n';
    os << "hypothesis-met," << (p.hypothesis_met ? "true" : "false") << '\n';
    os << "threshold," << fmt17(p.threshold) << '\n';
    os << "initial," << fmt17(p.initial) << '\n';
    os << "predicted-time," << fmt17(p.predicted_time) << '\n';
    os << "c1," << fmt17(p.c1) << '\n';
    os << "c2," << fmt17(p.c2) << '\n';
    os << "parameter," << fmt17(p.parameter) << '\n';
}

} // namespace ipm1d
