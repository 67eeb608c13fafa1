#include "ipm1d/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ipm1d {

namespace {

constexpr double kPi = std::numbers::pi;

// Distance from x beyond which the profile is treated through its envelope.
double reach(const TestFunction& f, double x, const QuadratureSpec& spec) {
    const double r = f.negligible_radius(1e-17 * std::max(1.0, f.sup_norm));
    return std::min(spec.truncation_radius, std::abs(x) + std::max(r, 1.0));
}

double envelope(const TestFunction& f, double r) {
    return f.tail_envelope ? f.tail_envelope(std::max(0.0, r)) : 0.0;
}

void require_even(const TestFunction& f, const char* route) {
    if (!f.even) {
        throw ParameterError(std::string(route) + " needs an even profile; got '" + f.id + "'");
    }
}

IntegralResult exact_zero() { return {}; }

// Near the origin f(y) - f(x) cancels; H_a f is odd and smooth there, so it is
// taken from the odd quintic through the values at h, 2h and 3h.
constexpr double kSmallX = 1e-3;

template <class Route>
IntegralResult odd_quintic_near_origin(Route route, double x) {
    const double h = kSmallX;
    IntegralResult r;
    double v[3];
    for (int k = 0; k < 3; ++k) {
        const IntegralResult rk = route((k + 1) * h);
        v[k] = rk.value / ((k + 1) * h);
        r.error = std::max(r.error, rk.error / ((k + 1) * h));
        r.converged = r.converged && rk.converged;
        r.evaluations += rk.evaluations;
    }
    // v_k = c1 + c3 (kh)^2 + c5 (kh)^4 in s = (x/h)^2: Lagrange through s = 1, 4, 9
    const double s = (x / h) * (x / h);
    const double l1 = (s - 4.0) * (s - 9.0) / 24.0;
    const double l2 = (s - 1.0) * (s - 9.0) / -15.0;
    const double l3 = (s - 1.0) * (s - 4.0) / 40.0;
    const double c5h4 = v[0] / 24.0 - v[1] / 15.0 + v[2] / 40.0;
    r.value = x * (l1 * v[0] + l2 * v[1] + l3 * v[2]);
    r.error = x * (r.error * (std::abs(l1) + std::abs(l2) + std::abs(l3)) + std::abs(c5h4) * s * s);
    return r;
}

} // namespace

void TransformParams::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ParameterError("kernel parameter a must be positive");
    }
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw ParameterError("gravitational constant g must be positive");
    }
}

IntegralResult ha_pv(const TestFunction& f, const TransformParams& p, double x,
                     const QuadratureSpec& spec) {
    p.validate();
    const double a2 = p.a * p.a;
    const double R = reach(f, x, spec);
    const auto g = [&](double y) {
        const double d = x - y;
        return a2 * f(y) / (d * (d * d + a2));
    };
    IntegralResult r = quad::integrate_pv(g, x, x - R, x + R, spec);
    // A constant far field cancels over the symmetric window; the rest is
    // bounded by the envelope against int_R^inf a^2/z^3.
    r.error += a2 / (R * R) * envelope(f, R - std::abs(x));
    r *= 1.0 / kPi;
    return r;
}

IntegralResult ha_even(const TestFunction& f, const TransformParams& p, double x,
                       const QuadratureSpec& spec) {
    p.validate();
    require_even(f, "ha_even");
    if (x == 0.0) {
        return exact_zero();
    }
    if (x < 0.0) {
        IntegralResult r = ha_even(f, p, -x, spec);
        r.value = -r.value;
        return r;
    }
    if (x < kSmallX) {
        return odd_quintic_near_origin([&](double s) { return ha_even(f, p, s, spec); }, x);
    }
    const double a2 = p.a * p.a;
    const double fx = f(x);
    const double R = x + reach(f, x, spec);
    const double delta = std::min(1e-3, 0.5 * x);
    const auto G = [&](double y) {
        const double num = (f(y) - fx) * (x * x + 3.0 * y * y + a2);
        const double dm = x - y;
        const double dp = x + y;
        return num / ((x * x - y * y) * (dm * dm + a2) * (dp * dp + a2));
    };
    IntegralResult r = quad::integrate_adaptive(G, 0.0, x - delta, spec);
    r += quad::integrate_adaptive(G, x + delta, R, spec);
    // Window: Simpson on (x - delta, x + delta) with the removable limit at the
    // centre; the gap to the pure Taylor (midpoint) term goes into the error.
    const double g0 = -f.derivative(x) / (2.0 * a2 * x);
    const double simpson = delta / 3.0 * (G(x - delta) + 4.0 * g0 + G(x + delta));
    r.value += simpson;
    r.error += std::abs(simpson - 2.0 * delta * g0);
    r *= 2.0 * a2 * x / kPi;

    // Beyond R: (f(y) - f(x)) ~ far_field - f(x); the kernel integral is closed form.
    const double tail_log =
        std::log((R - x) / (R + x) *
                 std::sqrt(((R + x) * (R + x) + a2) / ((R - x) * (R - x) + a2)));
    r.value += (f.far_field - fx) * tail_log / kPi;
    r.error += envelope(f, R) * std::abs(tail_log) / kPi;
    return r;
}

IntegralResult ha_logkernel(const TestFunction& f, const TransformParams& p, double x,
                            const QuadratureSpec& spec) {
    p.validate();
    const double a2 = p.a * p.a;
    const double R = reach(f, x, spec);
    const double U = std::sqrt(R);
    // t = +-u^2: log(u^2 / sqrt(u^4 + a^2)) * f'(x +- u^2) * 2u
    const auto side = [&](double sign) {
        return [&, sign](double u) {
            if (u == 0.0) {
                return 0.0;
            }
            const double t = u * u;
            const double lk = std::log(t) - 0.5 * std::log(t * t + a2);
            return 2.0 * u * lk * f.derivative(x + sign * t);
        };
    };
    IntegralResult r = quad::integrate_adaptive(side(1.0), 0.0, U, spec);
    r += quad::integrate_adaptive(side(-1.0), 0.0, U, spec);
    // |log| <= a^2 / (2 t^2) beyond R on each side
    r.error += a2 / R * envelope(f, R - std::abs(x));
    r *= 1.0 / kPi;
    return r;
}

IntegralResult ha_split(const TestFunction& f, const TransformParams& p, double x,
                        const QuadratureSpec& spec) {
    p.validate();
    require_even(f, "ha_split");
    if (x == 0.0) {
        return exact_zero();
    }
    if (x < 0.0) {
        IntegralResult r = ha_split(f, p, -x, spec);
        r.value = -r.value;
        return r;
    }
    if (x < kSmallX) {
        return odd_quintic_near_origin([&](double s) { return ha_split(f, p, s, spec); }, x);
    }
    const double a2 = p.a * p.a;
    const double lx = std::log1p(a2 / (x * x));
    // y = x -+ s^2 on (0, 2x)
    const auto local = [&](double sign) {
        return [&, sign](double s) {
            if (s == 0.0) {
                return 0.0;
            }
            const double d = s * s;
            return 2.0 * s * f.derivative(x + sign * d) * (lx - std::log1p(a2 / (d * d)));
        };
    };
    const double S = std::sqrt(x);
    IntegralResult t1 = quad::integrate_adaptive(local(-1.0), 0.0, S, spec);
    t1 += quad::integrate_adaptive(local(1.0), 0.0, S, spec);
    t1 *= 1.0 / (2.0 * kPi);

    const double R = reach(f, 0.0, spec);
    const auto far = [&](double y) { return (f(y - x) - f(x + y)) / (y * (y * y + a2)); };
    IntegralResult t2 = quad::integrate_adaptive(far, x, x + R, spec);
    t2 *= a2 / kPi;
    t2.error += a2 / kPi * envelope(f, R) / ((x + R) * (x + R));
    return t1 + t2;
}

std::complex<double> multiplier(double xi, double a) {
    if (xi == 0.0) {
        return {0.0, 0.0};
    }
    const double mag = -std::expm1(-2.0 * kPi * a * std::abs(xi));
    return {0.0, xi > 0.0 ? -mag : mag};
}

MultiplierTable::MultiplierTable(double half_width, int n, double a) {
    if (!is_power_of_two(n) || !(half_width > 0.0) || !(a > 0.0)) {
        throw std::invalid_argument("multiplier table needs a valid grid and a > 0");
    }
    const int nyq = n / 2;
    xi_.resize(nyq + 1);
    m_.resize(nyq + 1);
    for (int k = 0; k <= nyq; ++k) {
        xi_[k] = k / (2.0 * half_width);
        m_[k] = multiplier(xi_[k], a);
    }
    m_[nyq] = 0.0;

    // Image sums over 0 < |m| <= 200; the remainder pairs cancel to O(x / m^4).
    constexpr int kImages = 200;
    const double a2 = a * a;
    const double dx = 2.0 * half_width / n;
    s0_.assign(n, 0.0);
    s1_.assign(n, 0.0);
    s2_.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double x = -half_width + j * dx;
        for (int m = kImages; m >= 1; --m) {
            for (double z : {x + 2.0 * half_width * m, x - 2.0 * half_width * m}) {
                const double d = z * (z * z + a2);
                const double dp = 3.0 * z * z + a2;
                s0_[j] += a2 / (kPi * d);
                s1_[j] -= a2 / kPi * dp / (d * d);
                s2_[j] += a2 / kPi * (2.0 * dp * dp / (d * d * d) - 6.0 * z / (d * d));
            }
        }
    }
}

void MultiplierTable::remove_images(const GridFunction& input, GridFunction& output) const {
    if (static_cast<std::size_t>(input.size()) != s0_.size() || output.size() != input.size()) {
        throw std::invalid_argument("grid does not match the multiplier table");
    }
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (int j = 0; j < input.size(); ++j) {
        const double x = input.x(j);
        m0 += input[j];
        m1 += x * input[j];
        m2 += x * x * input[j];
    }
    const double dx = input.dx();
    m0 *= dx;
    m1 *= dx;
    m2 *= dx;
    for (int j = 0; j < input.size(); ++j) {
        output.samples()[j] -= m0 * s0_[j] - m1 * s1_[j] + 0.5 * m2 * s2_[j];
    }
}

void MultiplierTable::apply(Spectrum& s) const {
    if (s.size() != m_.size()) {
        throw std::invalid_argument("spectrum does not match the multiplier table");
    }
    for (std::size_t k = 0; k < s.size(); ++k) {
        s[k] *= m_[k];
    }
}

GridTransform ha_grid(const GridFunction& u, const TransformParams& p, bool image_correction) {
    p.validate();
    GridTransform out;
    const double edge = u.edge_magnitude();
    if (edge > 1e-12 * std::max(1.0, u.sup_norm())) {
        std::ostringstream os;
        os.precision(3);
        os << "input does not decay at the domain edge (|u| = " << edge
           << "); periodic wrap-around pollutes the transform";
        out.warnings.push_back(os.str());
    }
    const MultiplierTable table(u.half_width(), u.size(), p.a);
    Spectrum s = u.spectrum();
    table.apply(s);
    out.values = GridFunction::from_spectrum(u.half_width(), u.size(), s);
    if (image_correction) {
        table.remove_images(u, out.values);
    }
    return out;
}

std::string to_string(Route r) {
    switch (r) {
    case Route::PV:
        return "pv";
    case Route::Even:
        return "even";
    case Route::LogKernel:
        return "logkernel";
    case Route::Split:
        return "split";
    }
    return "unknown";
}

Route parse_route(const std::string& name) {
    for (Route r : {Route::PV, Route::Even, Route::LogKernel, Route::Split}) {
        if (to_string(r) == name) {
            return r;
        }
    }
    throw ParameterError("unknown transform route '" + name + "'");
}

IntegralResult ha(Route r, const TestFunction& f, const TransformParams& p, double x,
                  const QuadratureSpec& spec) {
    switch (r) {
    case Route::PV:
        return ha_pv(f, p, x, spec);
    case Route::Even:
        return ha_even(f, p, x, spec);
    case Route::LogKernel:
        return ha_logkernel(f, p, x, spec);
    case Route::Split:
        return ha_split(f, p, x, spec);
    }
    throw ParameterError("unknown transform route");
}

double even_kernel(double x, double y, double a) {
    const double a2 = a * a;
    const double dm = x - y;
    const double dp = x + y;
    return (x * x + 3.0 * y * y + a2) / ((x * x - y * y) * (dm * dm + a2) * (dp * dp + a2));
}

double even_kernel_dy(double x, double y, double a) {
    const double a2 = a * a;
    const double qm = (x - y) * (x - y) + a2;
    const double qp = (x + y) * (x + y) + a2;
    const double d = x * x - y * y;
    const double q2 = qm * qm * qp * qp;
    const double x2 = x * x;
    const double y2 = y * y;
    return 6.0 * y * (2.0 * x2 + 2.0 * y2 + a2) / q2 +
           2.0 * a2 * y *
               (2.0 * (3.0 * x2 * x2 + 2.0 * x2 * y2 + 2.0 * a2 * y2 + 3.0 * y2 * y2) +
                a2 * (4.0 * x2 + a2)) /
               (d * d * q2);
}

double even_kernel_dx(double x, double y, double a) {
    const double a2 = a * a;
    const double qm = (x - y) * (x - y) + a2;
    const double qp = (x + y) * (x + y) + a2;
    const double d = x * x - y * y;
    const double q2 = qm * qm * qp * qp;
    const double x2 = x * x;
    const double y2 = y * y;
    return -2.0 * x * (2.0 * x2 + 10.0 * y2 + 3.0 * a2) / q2 -
           2.0 * a2 * x *
               (2.0 * (x2 * x2 + 6.0 * x2 * y2 + 2.0 * a2 * x2 + y2 * y2) + a2 * (4.0 * y2 + a2)) /
               (d * d * q2);
}

double log_kernel(double x, double a) { return std::log(std::abs(x)) - 0.5 * std::log(x * x + a * a); }

double log_kernel_dx(double x, double a) { return a * a / (x * (x * x + a * a)); }

} // namespace ipm1d
