#include "ipm1d/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace ipm1d::quad {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEpmach = std::numeric_limits<double>::epsilon();
constexpr double kUflow = std::numeric_limits<double>::min();

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
};

bool operator<(const Segment& l, const Segment& r) { return l.error < r.error; }

double checked(const Integrand& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        throw NonFiniteIntegrand(x);
    }
    return v;
}

Segment gauss_kronrod(const Integrand& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = checked(f, center);
    double resk = fc * kWgk[10];
    double resabs = std::abs(resk);
    double resg = 0.0;
    std::array<double, 10> f1{};
    std::array<double, 10> f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = checked(f, center - dx);
        f2[j] = checked(f, center + dx);
        const double pair = f1[j] + f2[j];
        resk += kWgk[j] * pair;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) {
            resg += kWg[j / 2] * pair;
        }
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (resabs > kUflow / (50.0 * kEpmach)) {
        err = std::max(50.0 * kEpmach * resabs, err);
    }
    return {lo, hi, value, err};
}

IntegralResult adaptive_finite(const Integrand& f, double lo, double hi,
                               const QuadratureSpec& spec) {
    IntegralResult out;
    if (lo == hi) {
        return out;
    }
    std::vector<Segment> heap;
    heap.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
    heap.push_back(gauss_kronrod(f, lo, hi));
    out.evaluations = 21;
    double total = heap.front().value;
    double error = heap.front().error;
    int splits = 0;
    bool stuck = false;
    while (error > spec.target(total) && splits < spec.max_subdivisions) {
        std::pop_heap(heap.begin(), heap.end());
        const Segment worst = heap.back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const double scale = std::max(std::abs(worst.lo), std::abs(worst.hi));
        if (worst.hi - worst.lo <= 64.0 * kEpmach * std::max(scale, kUflow)) {
            stuck = true;
            std::push_heap(heap.begin(), heap.end());
            break;
        }
        heap.pop_back();
        const Segment left = gauss_kronrod(f, worst.lo, mid);
        const Segment right = gauss_kronrod(f, mid, worst.hi);
        out.evaluations += 42;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        ++splits;
        if (splits % 64 == 0) {
            total = 0.0;
            error = 0.0;
            for (const auto& s : heap) {
                total += s.value;
                error += s.error;
            }
        }
    }
    total = 0.0;
    error = 0.0;
    for (const auto& s : heap) {
        total += s.value;
        error += s.error;
    }
    out.value = total;
    out.error = error;
    out.converged = !stuck && error <= spec.target(total);
    return out;
}

} // namespace

std::vector<double> QuadratureSpec::default_excision() {
    std::vector<double> eps;
    for (int k = 4; k <= 20; ++k) {
        eps.push_back(std::ldexp(1.0, -k));
    }
    return eps;
}

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw std::invalid_argument("quadrature tolerances must be positive");
    }
    if (max_subdivisions < 1) {
        throw std::invalid_argument("max_subdivisions must be at least 1");
    }
    if (!(truncation_radius > 0.0)) {
        throw std::invalid_argument("truncation_radius must be positive");
    }
    if (pv_excision.size() < 2) {
        throw std::invalid_argument("pv_excision needs at least two entries");
    }
    for (std::size_t i = 0; i < pv_excision.size(); ++i) {
        if (!(pv_excision[i] > 0.0) || (i > 0 && !(pv_excision[i] < pv_excision[i - 1]))) {
            throw std::invalid_argument("pv_excision must be positive and strictly decreasing");
        }
    }
}

double QuadratureSpec::target(double value) const {
    return std::max(abs_tol, rel_tol * std::abs(value));
}

IntegralResult& IntegralResult::operator+=(const IntegralResult& other) {
    value += other.value;
    error += other.error;
    converged = converged && other.converged;
    evaluations += other.evaluations;
    return *this;
}

IntegralResult& IntegralResult::operator*=(double scale) {
    value *= scale;
    error *= std::abs(scale);
    return *this;
}

IntegralResult operator+(IntegralResult lhs, const IntegralResult& rhs) {
    lhs += rhs;
    return lhs;
}

IntegralResult operator*(double scale, IntegralResult r) {
    r *= scale;
    return r;
}

NonFiniteIntegrand::NonFiniteIntegrand(double abscissa)
    : std::runtime_error([abscissa] {
          std::ostringstream os;
          os.precision(17);
          os << "non-finite integrand value at x = " << abscissa;
          return os.str();
      }()),
      abscissa_(abscissa) {}

IntegralResult integrate_adaptive(const Integrand& f, double lo, double hi,
                                  const QuadratureSpec& spec) {
    if (std::isnan(lo) || std::isnan(hi) || !(lo <= hi)) {
        throw std::invalid_argument("integrate_adaptive requires lo <= hi");
    }
    if (lo == hi) {
        return {};
    }
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (lo_inf && hi_inf) {
        return integrate_adaptive(f, lo, 0.0, spec) + integrate_adaptive(f, 0.0, hi, spec);
    }
    if (hi_inf) {
        const Integrand mapped = [&](double u) {
            const double s = 1.0 - u;
            const double v = checked(f, lo + u / s);
            return v == 0.0 ? 0.0 : v / (s * s);
        };
        return adaptive_finite(mapped, 0.0, 1.0, spec);
    }
    if (lo_inf) {
        const Integrand mapped = [&](double u) {
            const double s = 1.0 - u;
            const double v = checked(f, hi - u / s);
            return v == 0.0 ? 0.0 : v / (s * s);
        };
        return adaptive_finite(mapped, 0.0, 1.0, spec);
    }
    const Integrand plain = [&](double x) { return checked(f, x); };
    return adaptive_finite(plain, lo, hi, spec);
}

IntegralResult integrate_piecewise(const Integrand& f, std::vector<double> points,
                                   const QuadratureSpec& spec) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    IntegralResult total;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        total += integrate_adaptive(f, points[i], points[i + 1], spec);
    }
    return total;
}

IntegralResult integrate_pv(const Integrand& g, double singularity, double lo, double hi,
                            const QuadratureSpec& spec) {
    if (!(lo < singularity && singularity < hi)) {
        throw std::invalid_argument("integrate_pv requires lo < singularity < hi");
    }
    spec.validate();
    const double s = singularity;
    const double reach = std::min(s - lo, hi - s);

    std::vector<double> eps = spec.pv_excision;
    if (eps.front() >= reach) {
        const double shrink = 0.5 * reach / eps.front();
        for (double& e : eps) {
            e *= shrink;
        }
    }

    // Symmetrised integrand: bounded near t = 0 for a simple pole.
    const Integrand folded = [&](double t) { return g(s + t) + g(s - t); };

    IntegralResult outer = integrate_adaptive(folded, eps.front(), reach, spec);
    if (s - lo > reach) {
        outer += integrate_adaptive(g, lo, s - reach, spec);
    }
    if (hi - s > reach) {
        outer += integrate_adaptive(g, s + reach, hi, spec);
    }

    const std::size_t n = eps.size();
    std::vector<double> excised(n);
    excised[0] = outer.value;
    IntegralResult pieces;
    for (std::size_t k = 1; k < n; ++k) {
        const IntegralResult piece = integrate_adaptive(folded, eps[k], eps[k - 1], spec);
        pieces += piece;
        excised[k] = excised[k - 1] + piece.value;
    }

    // Neville extrapolation of excised(eps) to eps = 0.
    constexpr std::size_t kMaxOrder = 6;
    std::vector<std::vector<double>> table(n);
    double best = excised[n - 1];
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t order = std::min(i, kMaxOrder);
        table[i].resize(order + 1);
        table[i][0] = excised[i];
        for (std::size_t j = 1; j <= order; ++j) {
            const double xl = eps[i - j];
            const double xr = eps[i];
            table[i][j] = (xl * table[i][j - 1] - xr * table[i - 1][j - 1]) / (xl - xr);
            double err = std::abs(table[i][j] - table[i][j - 1]);
            if (table[i - 1].size() > j) {
                err = std::max(err, std::abs(table[i][j] - table[i - 1][j]));
            }
            if (err < best_err) {
                best_err = err;
                best = table[i][j];
            }
        }
    }

    IntegralResult out;
    out.value = best;
    out.error = best_err + outer.error + pieces.error;
    out.evaluations = outer.evaluations + pieces.evaluations;
    out.converged = outer.converged && pieces.converged && best_err <= spec.target(best);
    return out;
}

Weight Weight::power(double beta, double upper) {
    return {WeightKind::Power, beta, 1.0, upper};
}

Weight Weight::power_shifted(double beta, double a) {
    return {WeightKind::PowerShifted, beta, a, std::numeric_limits<double>::infinity()};
}

Weight Weight::exp_over_x() {
    return {WeightKind::ExpOverX, 1.0, 1.0, std::numeric_limits<double>::infinity()};
}

Weight Weight::omega_over_sq(double a) {
    return {WeightKind::OmegaOverSq, 2.0, a, std::numeric_limits<double>::infinity()};
}

Weight Weight::eta(double alpha) {
    return {WeightKind::Eta, alpha, 1.0, std::numeric_limits<double>::infinity()};
}

double Weight::operator()(double x) const {
    switch (kind) {
    case WeightKind::Power:
        return std::pow(x, -beta);
    case WeightKind::PowerShifted:
        return std::pow(x, -beta) / (x * x + a * a);
    case WeightKind::ExpOverX:
        return std::exp(-x) / x;
    case WeightKind::OmegaOverSq: {
        const double q = x * x + a * a;
        return (3.0 * x * x + a * a) / (x * x * q * q);
    }
    case WeightKind::Eta:
        return x < 1.0 ? std::pow(x, -beta) : std::pow(x, -4.0 - beta);
    }
    return 0.0;
}

double Weight::log_weight_jacobian(double t) const {
    // log(e^2t + c) without overflow for large t
    const auto log_sq_plus = [t](double c) {
        return t > 0.0 ? 2.0 * t + std::log1p(c * std::exp(-2.0 * t)) : std::log(std::exp(2.0 * t) + c);
    };
    switch (kind) {
    case WeightKind::Power:
        return (1.0 - beta) * t;
    case WeightKind::PowerShifted:
        return (1.0 - beta) * t - log_sq_plus(a * a);
    case WeightKind::ExpOverX:
        return -std::exp(t);
    case WeightKind::OmegaOverSq:
        return std::log(3.0) + log_sq_plus(a * a / 3.0) - 2.0 * log_sq_plus(a * a) - t;
    case WeightKind::Eta:
        return t < 0.0 ? (1.0 - beta) * t : (-3.0 - beta) * t;
    }
    return 0.0;
}

double Weight::origin_order() const {
    switch (kind) {
    case WeightKind::Power:
    case WeightKind::PowerShifted:
    case WeightKind::Eta:
        return beta;
    case WeightKind::ExpOverX:
        return 1.0;
    case WeightKind::OmegaOverSq:
        return 2.0;
    }
    return 0.0;
}

IntegralResult integrate_weighted_halfline(const Integrand& f, const Weight& weight,
                                           const QuadratureSpec& spec) {
    if (!(weight.upper > 0.0)) {
        throw std::invalid_argument("weighted half-line integral needs a positive upper limit");
    }
    if (weight.origin_order() >= 1.0) {
        const double f0 = f(0.0);
        if (!std::isfinite(f0) || std::abs(f0) > 1e-12) {
            std::ostringstream os;
            os << "integrand does not vanish at the origin (f(0) = " << f0
               << ") but the weight is non-integrable there (order " << weight.origin_order()
               << ")";
            throw DivergentIntegral(os.str());
        }
    }
    const double split = std::min(1.0, weight.upper);
    const Integrand origin = [&](double t) {
        const double fx = f(std::exp(t));
        if (fx == 0.0) {
            return 0.0;
        }
        const double lw = weight.log_weight_jacobian(t);
        const double w = std::exp(lw);
        if (std::isinf(w)) {
            return std::copysign(std::exp(std::log(std::abs(fx)) + lw), fx);
        }
        return fx * w;
    };
    IntegralResult out = integrate_adaptive(origin, -std::numeric_limits<double>::infinity(),
                                            std::log(split), spec);
    if (weight.upper > 1.0) {
        // algebraic tails decay exponentially in t
        out += integrate_adaptive(origin, 0.0, std::log(weight.upper), spec);
    }
    return out;
}

} // namespace ipm1d::quad
