#include "ipm1d/inequalities.hpp"

#include "ipm1d/format.hpp"
#include "ipm1d/transform.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

namespace ipm1d {

namespace {

using quad::IntegralResult;
using quad::Weight;

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ParameterError(what);
    }
}

void require_hypothesis(bool ok, const TestFunction& f, const std::string& what) {
    if (!ok) {
        throw HypothesisError("'" + f.id + "' violates the hypothesis: " + what);
    }
}

bool near_constant(const TestFunction& f) { return f.is_constant(); }

// H_a f evaluated through one route, remembering the worst inner error.
class Transform {
public:
    Transform(const TestFunction& f, double a, const quad::QuadratureSpec& spec, Route route)
        : f_(f), p_{a, 1.0}, spec_(spec), route_(route) {}

    double operator()(double x) const {
        const IntegralResult r = ha(route_, f_, p_, x, spec_);
        max_error_ = std::max(max_error_, r.error);
        converged_ = converged_ && r.converged;
        return r.value;
    }
    double max_error() const { return max_error_; }
    bool converged() const { return converged_; }

private:
    const TestFunction& f_;
    TransformParams p_;
    const quad::QuadratureSpec& spec_;
    Route route_;
    mutable double max_error_ = 0.0;
    mutable bool converged_ = true;
};

// Cut-off beyond which f' (and f - far field) is below 1e-14 relative.
double derivative_cutoff(const TestFunction& f) {
    return std::max(1.0, f.negligible_radius(1e-14 * std::max(1.0, f.sup_norm)));
}

Weight with_upper(Weight w, double upper) {
    w.upper = std::min(w.upper, upper);
    return w;
}

// int_0^upper (-H f f' extra) w, plus the propagated inner error.
IntegralResult nonlinear_integral(const TestFunction& f, double a, Weight w,
                                  const std::function<double(double)>& extra,
                                  const CheckOptions& opt) {
    Transform H(f, a, opt.inner, Route::Even);
    w = with_upper(w, derivative_cutoff(f));
    IntegralResult r = quad::integrate_weighted_halfline(
        [&](double x) {
            const double d = f.derivative(x);
            if (d == 0.0) {
                return 0.0;
            }
            return -H(x) * d * extra(x);
        },
        w, opt.outer);
    const IntegralResult mass = quad::integrate_weighted_halfline(
        [&](double x) { return std::abs(f.derivative(x) * extra(x)); }, w, opt.outer);
    r.error += H.max_error() * mass.value;
    r.converged = r.converged && H.converged();
    return r;
}

IntegralResult profile_integral(const std::function<double(double)>& g, Weight w,
                                const CheckOptions& opt) {
    return quad::integrate_weighted_halfline(g, w, opt.outer);
}

InequalityReport base(InequalityId id, const TestFunction& f) {
    InequalityReport r;
    r.id = id;
    r.function_id = f.id;
    return r;
}

void finish_lower(InequalityReport& r) {
    r.margin = r.lhs - r.rhs;
    r.pass = std::isfinite(r.margin) && r.margin >= -10.0 * r.quad_error;
}

void finish_upper(InequalityReport& r) {
    r.margin = r.rhs - r.lhs;
    r.pass = std::isfinite(r.margin) && r.margin >= -10.0 * r.quad_error;
}

void note_convergence(InequalityReport& r, bool converged) {
    if (!converged) {
        r.note = "quadrature budget exhausted";
    }
}

void check_sigma(double sigma) { require(sigma > -1.0 && sigma < 1.0, "sigma must lie in (-1, 1)"); }

void check_monotone_even(const TestFunction& f) {
    require_hypothesis(f.even, f, "even");
    require_hypothesis(f.monotone_decreasing, f, "monotone decreasing on (0, inf)");
}

} // namespace

quad::QuadratureSpec CheckOptions::loose() {
    quad::QuadratureSpec s;
    s.abs_tol = 1e-9;
    s.rel_tol = 1e-8;
    return s;
}

double ConstantCatalog::C_a_sigma(double a, double sigma) {
    require(a > 0.0, "a must be positive");
    check_sigma(sigma);
    return a * a / kPi * (3.0 + sigma - 2.0 * std::sqrt(2.0 + sigma));
}

double ConstantCatalog::C_a_sigma_L(double a, double sigma, double L) {
    require(a > 0.0 && L > 0.0, "a and L must be positive");
    check_sigma(sigma);
    return a * a * (3.0 + sigma - 2.0 * std::sqrt(2.0 + sigma)) / (kPi * (a * a + L * L));
}

double ConstantCatalog::C_a_sigma_p(double a, double sigma, double p) {
    require(a > 0.0, "a must be positive");
    check_sigma(sigma);
    require(p > 1.0 && std::isfinite(p), "p must lie in (1, inf)");
    return (1.0 + sigma) * a * a / ((p + 1.0) * kPi) *
           std::pow(1.0 - std::pow(2.0 / (3.0 + sigma), 1.0 / p), p);
}

double ConstantCatalog::C_prime_p_sigma(double p, double sigma, double q, double c) {
    require(p >= 1.0, "p must be at least 1");
    require(sigma > 0.0, "sigma must be positive");
    require(q > 1.0 && q < 2.0, "q must lie in (1, 2)");
    require(c > 0.0 && c < 1.0, "c must lie in (0, 1)");
    const double lead = std::pow(1.0 - c, p + 1.0) * std::pow(q, sigma);
    if (!(lead > 1.0)) {
        throw ParameterError("infeasible (q, c): need (1-c)^(p+1) q^sigma > 1, got " + fmt17(lead));
    }
    return c * c * (lead - 1.0) / (p * (q - 1.0) * std::pow(q, sigma + 2.0) * (2.0 * lead - 1.0));
}

double ConstantCatalog::exp_defect(double a) {
    require(a > 0.0, "a must be positive");
    return 2.0 / kPi * (4719.0 + 3.0 / (a * a));
}

double ConstantCatalog::threshold_Jtilde(double a) {
    require(a > 0.0, "a must be positive");
    return std::sqrt((3.0 + 4719.0 * a * a) * (1.0 + 2.0 * a * a));
}

double ConstantCatalog::bound_F(double alpha, double sup_norm) {
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    return 8.0 * sup_norm / ((1.0 - alpha) * (3.0 + alpha));
}

double ConstantCatalog::omega(double a, double x) {
    const double s = x * x + a * a;
    return (3.0 * x * x + a * a) / (s * s);
}

double ConstantCatalog::omega_max(double a) { return 9.0 / (8.0 * a * a); }

double ConstantCatalog::default_c(double p, double sigma, double q) {
    return 0.5 * (1.0 - std::pow(q, -sigma / (p + 1.0)));
}

std::string to_string(InequalityId id) {
    switch (id) {
    case InequalityId::PointwiseLower:
        return "pointwise-lower";
    case InequalityId::WeightedMonotone:
        return "weighted-monotone";
    case InequalityId::WeightedFiniteInterval:
        return "weighted-finite-interval";
    case InequalityId::WeightedPowerP:
        return "weighted-power-p";
    case InequalityId::WeightedSigma0:
        return "weighted-sigma0";
    case InequalityId::WeightedExponential:
        return "weighted-exponential";
    case InequalityId::LocalVelocity:
        return "local-velocity";
    case InequalityId::LocalNonlinear:
        return "local-nonlinear";
    case InequalityId::GlobalIdentity:
        return "global-identity";
    case InequalityId::UpperBoundQ:
        return "upper-bound-q";
    case InequalityId::KiselevIncreasing:
        return "kiselev-increasing";
    }
    return "unknown";
}

const std::vector<InequalityId>& all_inequalities() {
    static const std::vector<InequalityId> ids = {
        InequalityId::PointwiseLower,      InequalityId::WeightedMonotone,
        InequalityId::WeightedFiniteInterval, InequalityId::WeightedPowerP,
        InequalityId::WeightedSigma0,      InequalityId::WeightedExponential,
        InequalityId::LocalVelocity,       InequalityId::LocalNonlinear,
        InequalityId::GlobalIdentity,      InequalityId::UpperBoundQ,
        InequalityId::KiselevIncreasing,
    };
    return ids;
}

InequalityId parse_inequality(const std::string& name) {
    for (InequalityId id : all_inequalities()) {
        if (to_string(id) == name) {
            return id;
        }
    }
    throw ParameterError("unknown inequality id '" + name + "'");
}

double local_log_factor(double a, double x1, double x2) {
    const double a2 = a * a;
    const double s = x1 + x2;
    const double d = x1 - x2;
    return std::log(d / s * std::sqrt((s * s + a2) / (d * d + a2)));
}

InequalityReport check_pointwise_lower(const TestFunction& f, double a, double x,
                                       const CheckOptions& opt) {
    require(a > 0.0 && x > 0.0, "pointwise bound needs a > 0 and x > 0");
    check_monotone_even(f);
    InequalityReport r = base(InequalityId::PointwiseLower, f);
    r.a = a;
    r.x = x;
    if (!near_constant(f)) {
        const IntegralResult lhs = ha_even(f, {a, 1.0}, x, opt.inner);
        const double fx = f(x);
        const IntegralResult area =
            quad::integrate_adaptive([&](double y) { return f(y) - fx; }, 0.0, x, opt.inner);
        const double k = opt.constant_scale * 2.0 * a * a / (kPi * x * (x * x + a * a));
        r.lhs = lhs.value;
        r.rhs = k * area.value;
        r.quad_error = lhs.error + k * area.error;
        note_convergence(r, lhs.converged && area.converged);
    }
    finish_lower(r);
    return r;
}

InequalityReport check_ccf_weighted(const TestFunction& f, double a, double sigma,
                                    const CheckOptions& opt) {
    const double C = opt.constant_scale * ConstantCatalog::C_a_sigma(a, sigma);
    check_monotone_even(f);
    InequalityReport r = base(InequalityId::WeightedMonotone, f);
    r.a = a;
    r.sigma = sigma;
    if (!near_constant(f)) {
        const double f0 = f(0.0);
        const IntegralResult lhs =
            nonlinear_integral(f, a, Weight::power(1.0 + sigma), [](double) { return 1.0; }, opt);
        const IntegralResult rhs = profile_integral(
            [&](double x) {
                const double g = f(x) - f0;
                return g * g;
            },
            Weight::power_shifted(2.0 + sigma, a), opt);
        r.lhs = lhs.value;
        r.rhs = C * rhs.value;
        r.quad_error = lhs.error + C * rhs.error;
        note_convergence(r, lhs.converged && rhs.converged);
    }
    finish_lower(r);
    return r;
}

InequalityReport check_ccf_finite_interval(const TestFunction& f, double a, double sigma, double L,
                                           const CheckOptions& opt) {
    const double C = opt.constant_scale * ConstantCatalog::C_a_sigma_L(a, sigma, L);
    check_monotone_even(f);
    InequalityReport r = base(InequalityId::WeightedFiniteInterval, f);
    r.a = a;
    r.sigma = sigma;
    r.L = L;
    if (!near_constant(f)) {
        const double f0 = f(0.0);
        const IntegralResult lhs = nonlinear_integral(f, a, Weight::power(1.0 + sigma, L),
                                                      [](double) { return 1.0; }, opt);
        const IntegralResult rhs = profile_integral(
            [&](double x) {
                const double g = f(x) - f0;
                return g * g;
            },
            Weight::power(2.0 + sigma, L), opt);
        r.lhs = lhs.value;
        r.rhs = C * rhs.value;
        r.quad_error = lhs.error + C * rhs.error;
        note_convergence(r, lhs.converged && rhs.converged);
    }
    finish_lower(r);
    return r;
}

InequalityReport check_kiselev_p_smooth(const TestFunction& f, double a, double sigma, double p,
                                        const CheckOptions& opt) {
    const double C = opt.constant_scale * ConstantCatalog::C_a_sigma_p(a, sigma, p);
    check_monotone_even(f);
    InequalityReport r = base(InequalityId::WeightedPowerP, f);
    r.a = a;
    r.sigma = sigma;
    r.p = p;
    if (!near_constant(f)) {
        const double f0 = f(0.0);
        const auto drop = [&](double x) { return std::max(0.0, f0 - f(x)); };
        const IntegralResult lhs = nonlinear_integral(
            f, a, Weight::power(1.0 + sigma), [&](double x) { return std::pow(drop(x), p - 1.0); },
            opt);
        const IntegralResult rhs = profile_integral(
            [&](double x) { return std::pow(drop(x), p + 1.0); },
            Weight::power_shifted(2.0 + sigma, a), opt);
        r.lhs = lhs.value;
        r.rhs = C * rhs.value;
        r.quad_error = lhs.error + C * rhs.error;
        note_convergence(r, lhs.converged && rhs.converged);
    }
    finish_lower(r);
    return r;
}

InequalityReport check_sigma0_identity_bound(const TestFunction& f, double a,
                                             const CheckOptions& opt) {
    require(a > 0.0, "a must be positive");
    require_hypothesis(f.even, f, "even");
    InequalityReport r = base(InequalityId::WeightedSigma0, f);
    r.a = a;

    // 0 < omega_a <= 9/(8a^2) on a log-spaced sample plus the maximiser a/sqrt(3).
    const double wmax = ConstantCatalog::omega_max(a);
    bool weight_ok = true;
    for (int i = 0; i <= 400; ++i) {
        const double x = a * std::pow(10.0, -4.0 + 8.0 * i / 400.0);
        const double w = ConstantCatalog::omega(a, x);
        weight_ok = weight_ok && w > 0.0 && w <= wmax * (1.0 + 1e-14);
    }
    weight_ok = weight_ok && ConstantCatalog::omega(a, a / std::sqrt(3.0)) <= wmax * (1.0 + 1e-14);

    if (!near_constant(f)) {
        const double f0 = f(0.0);
        const double k = opt.constant_scale * a * a / kPi;
        const IntegralResult lhs =
            nonlinear_integral(f, a, Weight::power(1.0), [](double) { return 1.0; }, opt);
        const IntegralResult rhs = profile_integral(
            [&](double x) {
                const double g = f0 - f(x);
                return g * g;
            },
            Weight::omega_over_sq(a), opt);
        r.lhs = lhs.value;
        r.rhs = k * rhs.value;
        r.quad_error = lhs.error + k * rhs.error;
        note_convergence(r, lhs.converged && rhs.converged);
    }
    finish_lower(r);
    if (!weight_ok) {
        r.pass = false;
        r.note = "weight bound 0 < omega_a <= 9/(8a^2) violated";
    }
    return r;
}

InequalityReport check_exponential_weighted(const TestFunction& f, double a,
                                            const CheckOptions& opt) {
    const double defect = opt.constant_scale * ConstantCatalog::exp_defect(a);
    require_hypothesis(f.even, f, "even");
    InequalityReport r = base(InequalityId::WeightedExponential, f);
    r.a = a;
    const double sup2 = f.sup_norm * f.sup_norm;
    r.rhs = -defect * sup2;
    if (!near_constant(f)) {
        const double f0 = f(0.0);
        const double k = opt.constant_scale * a * a / (2.0 * kPi);
        const IntegralResult lhs =
            nonlinear_integral(f, a, Weight::exp_over_x(), [](double) { return 1.0; }, opt);
        const IntegralResult rhs = profile_integral(
            [&](double x) {
                const double g = f0 - f(x);
                return g * g;
            },
            Weight::omega_over_sq(a), opt);
        r.lhs = lhs.value;
        r.rhs += k * rhs.value;
        r.quad_error = lhs.error + k * rhs.error;
        note_convergence(r, lhs.converged && rhs.converged);
    }
    finish_lower(r);
    return r;
}

InequalityReport check_local_velocity_bound(const TestFunction& f, double a, double x1, double x2,
                                            const CheckOptions& opt) {
    require(a > 0.0, "a must be positive");
    require(x1 > x2 && x2 > 0.0, "need x1 > x2 > 0");
    check_monotone_even(f);
    InequalityReport r = base(InequalityId::LocalVelocity, f);
    r.a = a;
    r.x1 = x1;
    r.x2 = x2;
    if (!near_constant(f)) {
        const IntegralResult lhs = ha_even(f, {a, 1.0}, x2, opt.inner);
        r.lhs = lhs.value;
        r.rhs = opt.constant_scale / kPi * (f(x1) - f(x2)) * local_log_factor(a, x1, x2);
        r.quad_error = lhs.error;
        note_convergence(r, lhs.converged);
    }
    finish_lower(r);
    if (r.rhs < -1e-15) {
        r.pass = false;
        r.note = "right-hand side is negative";
    }
    return r;
}

InequalityReport check_local_nonlinear_upper(const TestFunction& f, double a, double x1,
                                             double x2, const CheckOptions& opt) {
    require(a > 0.0, "a must be positive");
    require(x1 > x2 && x2 > 0.0, "need x1 > x2 > 0");
    check_monotone_even(f);
    InequalityReport r = base(InequalityId::LocalNonlinear, f);
    r.a = a;
    r.x1 = x1;
    r.x2 = x2;
    if (!near_constant(f)) {
        Transform H(f, a, opt.inner, Route::Even);
        IntegralResult lhs = quad::integrate_adaptive(
            [&](double x) { return f.derivative(x) * H(x); }, x2, x1, opt.outer);
        const IntegralResult mass = quad::integrate_adaptive(
            [&](double x) { return std::abs(f.derivative(x)); }, x2, x1, opt.outer);
        lhs.error += H.max_error() * mass.value;
        const double df = f(x1) - f(x2);
        r.lhs = lhs.value;
        r.rhs = opt.constant_scale / (4.0 * kPi) * df * df * local_log_factor(a, x1, x2);
        r.quad_error = lhs.error;
        note_convergence(r, lhs.converged && H.converged());
    }
    finish_upper(r);
    return r;
}

InequalityReport check_global_identity(const TestFunction& f, double a, const CheckOptions& opt) {
    require(a > 0.0, "a must be positive");
    InequalityReport r = base(InequalityId::GlobalIdentity, f);
    r.a = a;
    if (!near_constant(f)) {
        const double R = derivative_cutoff(f);
        IntegralResult lhs;
        double inner_err = 0.0;
        bool inner_ok = true;
        if (f.even) {
            Transform H(f, a, opt.inner, Route::Even);
            lhs = quad::integrate_adaptive([&](double x) { return f.derivative(x) * H(x); }, 0.0,
                                           R, opt.outer);
            lhs *= 2.0;
            inner_err = 2.0 * H.max_error();
            inner_ok = H.converged();
        } else {
            Transform H(f, a, opt.inner, Route::PV);
            lhs = quad::integrate_piecewise([&](double x) { return f.derivative(x) * H(x); },
                                            {-R, 0.0, R}, opt.outer);
            inner_err = H.max_error();
            inner_ok = H.converged();
        }
        const IntegralResult mass = quad::integrate_piecewise(
            [&](double x) { return std::abs(f.derivative(x)); }, {-R, 0.0, R}, opt.outer);
        lhs.error += inner_err * mass.value;

        // z = x - y: the double integral is int_0^inf omega_a(z)/z^2 D(z) dz with
        // D(z) = int (f(y+z) - f(y))^2 dy, times 2 for z < 0.
        // D(z) ~ z^2 |f'|^2 near 0 and the weight ~ 1/z^2: only relative accuracy is usable.
        quad::QuadratureSpec dspec = opt.inner;
        dspec.abs_tol = 1e-300;
        dspec.rel_tol = std::min(dspec.rel_tol, 1e-11);
        const auto breakpoints = [R](double z) {
            std::vector<double> pts{-R - z, R - z, -R, R};
            std::sort(pts.begin(), pts.end());
            return pts;
        };
        double d_rel = 0.0;
        const auto D = [&](double z) {
            if (z == 0.0) {
                return 0.0;
            }
            const IntegralResult d = quad::integrate_piecewise(
                [&](double y) {
                    const double v = f(y + z) - f(y);
                    return v * v;
                },
                breakpoints(z), dspec);
            if (d.value > 0.0) {
                d_rel = std::max(d_rel, d.error / d.value);
            }
            return d.value;
        };
        IntegralResult dbl = quad::integrate_weighted_halfline(D, Weight::omega_over_sq(a), opt.outer);
        dbl.error += d_rel * std::abs(dbl.value);
        const double k = opt.constant_scale * a * a / kPi;
        r.lhs = lhs.value;
        r.rhs = -k * dbl.value;
        r.quad_error = lhs.error + k * dbl.error;
        note_convergence(r, lhs.converged && dbl.converged && inner_ok);
    }
    r.margin = std::abs(r.lhs - r.rhs);
    r.pass = std::isfinite(r.margin) && r.margin <= 1e-6 * (1.0 + std::abs(r.lhs));
    if (r.rhs > 0.0) {
        r.pass = false;
        r.note = "double integral has the wrong sign";
    }
    return r;
}

InequalityReport check_upper_bound_q(const TestFunction& f, double a, double x, double q,
                                     const CheckOptions& opt) {
    require(a > 0.0 && x > 0.0, "need a > 0 and x > 0");
    require(q > 1.0 && q < 2.0, "q must lie in (1, 2)");
    require_hypothesis(f.even, f, "even");
    require_hypothesis(f.monotone_increasing, f, "f' >= 0 on (0, inf)");
    InequalityReport r = base(InequalityId::UpperBoundQ, f);
    r.a = a;
    r.x = x;
    r.q = q;
    if (!near_constant(f)) {
        const IntegralResult lhs = ha_split(f, {a, 1.0}, x, opt.inner);
        r.lhs = lhs.value;
        r.rhs = -opt.constant_scale * a * a * q * (2.0 - q) / (2.0 * kPi) *
                (f(q * x) - f(x / q)) / (x * x + a * a);
        r.quad_error = lhs.error;
        note_convergence(r, lhs.converged);
    }
    finish_upper(r);
    return r;
}

InequalityReport check_kiselev_general(const TestFunction& f, double a, double sigma, double p,
                                       double q, double c, const CheckOptions& opt) {
    require(a > 0.0, "a must be positive");
    const double C = opt.constant_scale * ConstantCatalog::C_prime_p_sigma(p, sigma, q, c);
    require_hypothesis(f.even, f, "even");
    require_hypothesis(f.monotone_increasing, f, "f' >= 0 on (0, inf)");
    require_hypothesis(f.vanishes_at_origin, f, "f(0) = 0");
    InequalityReport r = base(InequalityId::KiselevIncreasing, f);
    r.a = a;
    r.sigma = sigma;
    r.p = p;
    r.q = q;
    r.c = c;
    if (!near_constant(f)) {
        const auto pos = [&](double x) { return std::max(0.0, f(x)); };
        const IntegralResult lhs = nonlinear_integral(
            f, a, Weight::power(sigma), [&](double x) { return std::pow(pos(x), p - 1.0); }, opt);
        const IntegralResult rhs = profile_integral(
            [&](double x) { return a * a * std::pow(pos(x), p + 1.0); },
            Weight::power_shifted(1.0 + sigma, a), opt);
        r.lhs = lhs.value;
        r.rhs = C * rhs.value;
        r.quad_error = lhs.error + C * rhs.error;
        note_convergence(r, lhs.converged && rhs.converged);
    }
    finish_lower(r);
    return r;
}

namespace {

enum class Pool { MonotoneDecreasing, Even, Increasing, Any };

Pool pool_for(InequalityId id) {
    switch (id) {
    case InequalityId::WeightedSigma0:
    case InequalityId::WeightedExponential:
        return Pool::Even;
    case InequalityId::UpperBoundQ:
    case InequalityId::KiselevIncreasing:
        return Pool::Increasing;
    case InequalityId::GlobalIdentity:
        return Pool::Any;
    default:
        return Pool::MonotoneDecreasing;
    }
}

TestFunction draw_function(Pool pool, int index, Uniform& rng, std::uint64_t seed, bool constants) {
    if (constants) {
        if (pool == Pool::Increasing) {
            return make_constant(0.0);
        }
        return make_constant(rng.in(-3.0, 3.0));
    }
    FunctionFamilySpec spec;
    spec.seed = seed;
    spec.terms = 1 + index % 5;
    switch (pool) {
    case Pool::MonotoneDecreasing: {
        static const Family fams[] = {Family::GaussianBump, Family::GaussianMixture,
                                      Family::SechProfile, Family::Plateau};
        spec.family = fams[index % 4];
        return make_random_even(spec);
    }
    case Pool::Even:
        spec.family = Family::GaussianMixture;
        spec.off_center = index % 2 == 0;
        return make_random_even(spec);
    case Pool::Increasing:
        spec.family = Family::IncreasingSaturating;
        return make_random_even(spec);
    case Pool::Any:
        if (index % 3 == 2) {
            TestFunction f = make_shifted_gaussian(rng.in(0.1, 3.0), rng.in(0.2, 5.0), rng.in(-3.0, 3.0));
            return f;
        }
        spec.family = index % 3 == 0 ? Family::GaussianMixture : Family::SechProfile;
        spec.off_center = index % 6 == 0;
        return make_random_even(spec);
    }
    return make_constant(0.0);
}

double log_uniform(Uniform& rng, double lo, double hi) {
    return lo * std::pow(hi / lo, rng.next());
}

InequalityReport run_case(InequalityId id, int index, const SuiteConfig& cfg) {
    const std::uint64_t seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(id) * 100003ULL +
                               static_cast<std::uint64_t>(index);
    Uniform rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const TestFunction f = draw_function(pool_for(id), index, rng, seed, cfg.constants_only);
    const double a = cfg.a_values[index % cfg.a_values.size()];
    const int slot = index / static_cast<int>(cfg.a_values.size());
    const CheckOptions& opt = cfg.options;
    static const double sigmas[] = {-0.5, 0.0, 0.5};
    try {
        switch (id) {
        case InequalityId::PointwiseLower:
            return check_pointwise_lower(f, a, log_uniform(rng, 0.05, 5.0), opt);
        case InequalityId::WeightedMonotone:
            return check_ccf_weighted(f, a, sigmas[slot % 3], opt);
        case InequalityId::WeightedFiniteInterval: {
            static const double Ls[] = {0.5, 2.0, 5.0};
            return check_ccf_finite_interval(f, a, sigmas[slot % 3], Ls[(slot / 3) % 3], opt);
        }
        case InequalityId::WeightedPowerP: {
            static const double ps[] = {1.5, 2.0, 3.0};
            return check_kiselev_p_smooth(f, a, sigmas[slot % 3], ps[(slot / 3) % 3], opt);
        }
        case InequalityId::WeightedSigma0:
            return check_sigma0_identity_bound(f, a, opt);
        case InequalityId::WeightedExponential:
            return check_exponential_weighted(f, a, opt);
        case InequalityId::LocalVelocity:
        case InequalityId::LocalNonlinear: {
            const double x2 = log_uniform(rng, 0.05, 3.0);
            const double x1 = x2 * rng.in(1.1, 4.0);
            return id == InequalityId::LocalVelocity ? check_local_velocity_bound(f, a, x1, x2, opt)
                                                     : check_local_nonlinear_upper(f, a, x1, x2, opt);
        }
        case InequalityId::GlobalIdentity:
            return check_global_identity(f, a, opt);
        case InequalityId::UpperBoundQ: {
            static const double qs[] = {1.1, 1.5, 1.9};
            return check_upper_bound_q(f, a, log_uniform(rng, 0.05, 5.0), qs[slot % 3], opt);
        }
        case InequalityId::KiselevIncreasing: {
            static const double ps[] = {1.0, 2.0, 1.5};
            static const double ss[] = {1.0, 0.5, 0.25};
            const double p = ps[slot % 3];
            const double s = ss[slot % 3];
            const double q = 1.5;
            return check_kiselev_general(f, a, s, p, q, ConstantCatalog::default_c(p, s, q), opt);
        }
        }
    } catch (const std::exception& e) {
        InequalityReport r;
        r.id = id;
        r.function_id = f.id;
        r.a = a;
        r.pass = false;
        r.note = e.what();
        return r;
    }
    return {};
}

} // namespace

std::vector<InequalityReport> run_suite(const SuiteConfig& cfg) {
    require(cfg.per_inequality >= 1, "suite size must be positive");
    require(!cfg.a_values.empty(), "need at least one value of a");
    struct Task {
        InequalityId id;
        int index;
    };
    std::vector<Task> tasks;
    for (InequalityId id : cfg.ids) {
        for (int i = 0; i < cfg.per_inequality; ++i) {
            tasks.push_back({id, i});
        }
    }
    std::vector<InequalityReport> out(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) {
            out[k] = run_case(tasks[k].id, tasks[k].index, cfg);
        }
    };
    const int jobs = std::max(1, cfg.jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    std::stable_sort(out.begin(), out.end(), [](const InequalityReport& l, const InequalityReport& r) {
        if (l.id != r.id) {
            return static_cast<int>(l.id) < static_cast<int>(r.id);
        }
        return l.function_id < r.function_id;
    });
    return out;
}

void write_csv(std::ostream& os, const std::vector<InequalityReport>& rows) {
    os << "inequality-id,function-id,a,sigma,p,q,c,L,x,x1,x2,lhs,rhs,margin,quad-error,pass,note\n";
    for (const auto& r : rows) {
        std::string note = r.note;
        std::replace(note.begin(), note.end(), ',', ';');
        std::replace(note.begin(), note.end(), '\n', ' ');
        os << to_string(r.id) << ',' << r.function_id << ',' << fmt17(r.a) << ',' << fmt17(r.sigma)
           << ',' << fmt17(r.p) << ',' << fmt17(r.q) << ',' << fmt17(r.c) << ',' << fmt17(r.L)
           << ',' << fmt17(r.x) << ',' << fmt17(r.x1) << ',' << fmt17(r.x2) << ','
           << fmt17(r.lhs) << ',' << fmt17(r.rhs) << ',' << fmt17(r.margin) << ','
           << fmt17(r.quad_error) << ',' << (r.pass ? "true" : "false") << ',' << note << '\n';
    }
}

} // namespace ipm1d
