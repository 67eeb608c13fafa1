#include "ipm1d/testfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace ipm1d {

namespace {

std::string fmt_id(const std::string& stem, std::initializer_list<double> params) {
    std::ostringstream os;
    os.precision(6);
    os << stem;
    for (double p : params) {
        os << '_' << p;
    }
    return os.str();
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ParameterError(std::string(what) + " must be positive and finite");
    }
}

// Maximum of |f| over a symmetric window, refined by golden-section search.
double numeric_sup(const std::function<double(double)>& f, double radius) {
    constexpr int kSamples = 8001;
    double best_x = 0.0;
    double best = std::abs(f(0.0));
    for (int i = 0; i < kSamples; ++i) {
        const double x = -radius + 2.0 * radius * i / (kSamples - 1);
        const double v = std::abs(f(x));
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    const double step = 2.0 * radius / (kSamples - 1);
    double lo = best_x - step;
    double hi = best_x + step;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100; ++it) {
        const double m1 = hi - ratio * (hi - lo);
        const double m2 = lo + ratio * (hi - lo);
        if (std::abs(f(m1)) > std::abs(f(m2))) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    return std::max(best, std::abs(f(0.5 * (lo + hi))));
}

double sech2(double z) {
    const double c = std::cosh(z);
    return 1.0 / (c * c);
}

} // namespace

Uniform::Uniform(std::uint64_t seed) : engine_(seed) {}

double Uniform::next() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double TestFunction::negligible_radius(double eps) const {
    if (!tail_envelope || tail_envelope(0.0) <= eps) {
        return 0.0;
    }
    double hi = 1.0;
    while (tail_envelope(hi) > eps) {
        hi *= 2.0;
        if (hi > 1e6) {
            return hi;
        }
    }
    double lo = hi / 2.0;
    if (tail_envelope(lo) <= eps) {
        lo = 0.0;
    }
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (tail_envelope(mid) > eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

bool TestFunction::is_constant() const {
    const double radius = std::max(1.0, negligible_radius(1e-14));
    constexpr int kSamples = 2001;
    for (int i = 0; i < kSamples; ++i) {
        const double x = -radius + 2.0 * radius * i / (kSamples - 1);
        if (std::abs(deriv(x)) > 1e-12) {
            return false;
        }
    }
    return true;
}

TestFunction make_constant(double value) {
    TestFunction f;
    f.id = fmt_id("constant", {value});
    f.eval = [value](double) { return value; };
    f.deriv = [](double) { return 0.0; };
    f.sup_norm = std::abs(value);
    f.even = true;
    f.monotone_decreasing = true;
    f.monotone_increasing = true;
    f.vanishes_at_origin = (value == 0.0);
    f.decay_rate = 1.0;
    f.far_field = value;
    f.tail_envelope = [](double) { return 0.0; };
    return f;
}

TestFunction make_gaussian(double amplitude, double width) {
    require_positive(width, "gaussian width");
    TestFunction f = make_gaussian_mixture({{amplitude, width, 0.0}});
    f.id = fmt_id("gaussian", {amplitude, width});
    return f;
}

TestFunction make_shifted_gaussian(double amplitude, double width, double center) {
    require_positive(width, "gaussian width");
    TestFunction f;
    f.id = fmt_id("shifted_gaussian", {amplitude, width, center});
    f.eval = [=](double x) {
        const double z = (x - center) / width;
        return amplitude * std::exp(-z * z);
    };
    f.deriv = [=](double x) {
        const double z = (x - center) / width;
        return -2.0 * amplitude * z / width * std::exp(-z * z);
    };
    f.sup_norm = std::abs(amplitude);
    f.even = (center == 0.0);
    f.monotone_decreasing = (center == 0.0 && amplitude >= 0.0);
    f.monotone_increasing = (center == 0.0 && amplitude <= 0.0);
    f.vanishes_at_origin = (amplitude == 0.0);
    f.decay_rate = width;
    f.far_field = 0.0;
    const double shift = std::abs(center);
    f.tail_envelope = [=](double r) {
        const double d = std::max(0.0, r - shift);
        const double z = d / width;
        return std::abs(amplitude) * (1.0 + 2.0 * (r + shift) / (width * width)) * std::exp(-z * z);
    };
    return f;
}

TestFunction make_gaussian_mixture(std::vector<GaussianTerm> terms) {
    if (terms.empty() || terms.size() > 5) {
        throw ParameterError("gaussian mixture needs between 1 and 5 terms");
    }
    bool centred = true;
    bool nonneg = true;
    bool nonpos = true;
    double max_width = 0.0;
    double max_center = 0.0;
    double amp_sum = 0.0;
    for (const auto& t : terms) {
        require_positive(t.width, "gaussian width");
        if (t.center < 0.0) {
            throw ParameterError("gaussian centre offsets must be non-negative");
        }
        centred = centred && t.center == 0.0;
        nonneg = nonneg && t.amplitude >= 0.0;
        nonpos = nonpos && t.amplitude <= 0.0;
        max_width = std::max(max_width, t.width);
        max_center = std::max(max_center, t.center);
        amp_sum += t.amplitude;
    }
    auto shared = std::make_shared<const std::vector<GaussianTerm>>(std::move(terms));
    TestFunction f;
    std::ostringstream id;
    id << "mixture" << shared->size();
    f.id = id.str();
    f.eval = [shared](double x) {
        double s = 0.0;
        for (const auto& t : *shared) {
            if (t.center == 0.0) {
                const double z = x / t.width;
                s += t.amplitude * std::exp(-z * z);
            } else {
                const double zl = (x - t.center) / t.width;
                const double zr = (x + t.center) / t.width;
                s += t.amplitude * (std::exp(-zl * zl) + std::exp(-zr * zr));
            }
        }
        return s;
    };
    f.deriv = [shared](double x) {
        double s = 0.0;
        for (const auto& t : *shared) {
            if (t.center == 0.0) {
                const double z = x / t.width;
                s -= 2.0 * t.amplitude * z / t.width * std::exp(-z * z);
            } else {
                const double zl = (x - t.center) / t.width;
                const double zr = (x + t.center) / t.width;
                s -= 2.0 * t.amplitude / t.width * (zl * std::exp(-zl * zl) + zr * std::exp(-zr * zr));
            }
        }
        return s;
    };
    f.even = true;
    f.monotone_decreasing = centred && nonneg;
    f.monotone_increasing = centred && nonpos;
    f.vanishes_at_origin = (f.eval(0.0) == 0.0);
    f.decay_rate = max_width;
    f.far_field = 0.0;
    f.tail_envelope = [shared](double r) {
        double s = 0.0;
        for (const auto& t : *shared) {
            const double d = std::max(0.0, r - t.center);
            const double z = d / t.width;
            const double mult = t.center == 0.0 ? 1.0 : 2.0;
            s += mult * std::abs(t.amplitude) * (1.0 + 2.0 * (r + t.center) / (t.width * t.width)) *
                 std::exp(-z * z);
        }
        return s;
    };
    if (centred && (nonneg || nonpos)) {
        f.sup_norm = std::abs(amp_sum);
    } else {
        f.sup_norm = numeric_sup(f.eval, max_center + 6.0 * max_width);
    }
    return f;
}

TestFunction make_sech(double amplitude, double width) {
    require_positive(width, "sech width");
    TestFunction f;
    f.id = fmt_id("sech", {amplitude, width});
    f.eval = [=](double x) { return amplitude * sech2(x / width); };
    f.deriv = [=](double x) {
        const double z = x / width;
        return -2.0 * amplitude / width * sech2(z) * std::tanh(z);
    };
    f.sup_norm = std::abs(amplitude);
    f.even = true;
    f.monotone_decreasing = amplitude >= 0.0;
    f.monotone_increasing = amplitude <= 0.0;
    f.vanishes_at_origin = (amplitude == 0.0);
    f.decay_rate = width;
    f.far_field = 0.0;
    f.tail_envelope = [=](double r) {
        return 4.0 * std::abs(amplitude) * (1.0 + 2.0 / width) * std::exp(-2.0 * r / width);
    };
    return f;
}

TestFunction make_plateau(double amplitude, double width) {
    require_positive(width, "plateau width");
    TestFunction f;
    f.id = fmt_id("plateau", {amplitude, width});
    f.eval = [=](double x) {
        const double z = x / width;
        const double z2 = z * z;
        return amplitude * std::exp(-z2 * z2);
    };
    f.deriv = [=](double x) {
        const double z = x / width;
        const double z2 = z * z;
        return -4.0 * amplitude * z2 * z / width * std::exp(-z2 * z2);
    };
    f.sup_norm = std::abs(amplitude);
    f.even = true;
    f.monotone_decreasing = amplitude >= 0.0;
    f.monotone_increasing = amplitude <= 0.0;
    f.vanishes_at_origin = (amplitude == 0.0);
    f.decay_rate = width;
    f.far_field = 0.0;
    f.tail_envelope = [=](double r) {
        const double z = r / width;
        const double z2 = z * z;
        return std::abs(amplitude) * (1.0 + 4.0 * z2 * z / width) * std::exp(-z2 * z2);
    };
    return f;
}

TestFunction make_increasing_saturating(double height, double scale) {
    require_positive(height, "saturating height");
    require_positive(scale, "saturating scale");
    TestFunction f = make_saturating_mixture({{height, scale}});
    f.id = fmt_id("saturating", {height, scale});
    return f;
}

TestFunction make_saturating_mixture(std::vector<SaturatingTerm> terms) {
    if (terms.empty() || terms.size() > 5) {
        throw ParameterError("saturating mixture needs between 1 and 5 terms");
    }
    double total = 0.0;
    double max_scale = 0.0;
    for (const auto& t : terms) {
        require_positive(t.height, "saturating height");
        require_positive(t.scale, "saturating scale");
        total += t.height;
        max_scale = std::max(max_scale, t.scale);
    }
    auto shared = std::make_shared<const std::vector<SaturatingTerm>>(std::move(terms));
    TestFunction f;
    std::ostringstream id;
    id << "saturating_mixture" << shared->size();
    f.id = id.str();
    f.eval = [shared](double x) {
        double s = 0.0;
        for (const auto& t : *shared) {
            const double z = x / t.scale;
            s -= t.height * std::expm1(-z * z);
        }
        return s;
    };
    f.deriv = [shared](double x) {
        double s = 0.0;
        for (const auto& t : *shared) {
            const double z = x / t.scale;
            s += 2.0 * t.height * z / t.scale * std::exp(-z * z);
        }
        return s;
    };
    f.sup_norm = total;
    f.even = true;
    f.monotone_decreasing = false;
    f.monotone_increasing = true;
    f.vanishes_at_origin = true;
    f.decay_rate = max_scale;
    f.far_field = total;
    f.tail_envelope = [shared](double r) {
        double s = 0.0;
        for (const auto& t : *shared) {
            const double z = r / t.scale;
            s += t.height * (1.0 + 2.0 * r / (t.scale * t.scale)) * std::exp(-z * z);
        }
        return s;
    };
    return f;
}

std::string to_string(Family f) {
    switch (f) {
    case Family::GaussianBump:
        return "gaussian-bump";
    case Family::GaussianMixture:
        return "gaussian-mixture";
    case Family::SechProfile:
        return "sech-profile";
    case Family::Plateau:
        return "plateau";
    case Family::IncreasingSaturating:
        return "increasing-saturating";
    }
    return "unknown";
}

Family parse_family(const std::string& name) {
    for (Family f : {Family::GaussianBump, Family::GaussianMixture, Family::SechProfile,
                     Family::Plateau, Family::IncreasingSaturating}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw ParameterError("unknown function family '" + name + "'");
}

void FunctionFamilySpec::validate() const {
    if (terms < 1 || terms > 5) {
        throw ParameterError("mixture term count must lie in [1, 5]");
    }
    if (!(amplitude_scale >= 0.0) || !std::isfinite(amplitude_scale)) {
        throw ParameterError("amplitude_scale must be finite and non-negative");
    }
    if (off_center && family != Family::GaussianMixture) {
        throw ParameterError("off-centre pairs are only available for gaussian-mixture");
    }
}

TestFunction make_random_even(const FunctionFamilySpec& spec) {
    spec.validate();
    std::ostringstream tag;
    tag << to_string(spec.family) << (spec.off_center ? "-pair" : "") << "-s" << spec.seed;
    if (spec.amplitude_scale == 0.0) {
        TestFunction zero = make_constant(0.0);
        zero.id = tag.str() + "-zero";
        return zero;
    }
    Uniform rng(spec.seed);
    const auto amplitude = [&] { return spec.amplitude_scale * rng.in(0.1, 3.0); };
    const auto width = [&] { return rng.in(0.2, 5.0); };
    const auto count = [&] {
        return 1 + std::min(spec.terms - 1, static_cast<int>(rng.next() * spec.terms));
    };

    TestFunction f;
    switch (spec.family) {
    case Family::GaussianBump: {
        const double a = amplitude();
        f = make_gaussian(a, width());
        break;
    }
    case Family::GaussianMixture: {
        std::vector<GaussianTerm> terms;
        const int n = count();
        for (int i = 0; i < n; ++i) {
            const double a = amplitude();
            const double w = width();
            const double c = spec.off_center ? w * rng.in(1.0, 2.0) + rng.in(0.0, 1.0) : 0.0;
            terms.push_back({a, w, c});
        }
        f = make_gaussian_mixture(std::move(terms));
        break;
    }
    case Family::SechProfile: {
        const double a = amplitude();
        f = make_sech(a, width());
        break;
    }
    case Family::Plateau: {
        const double a = amplitude();
        f = make_plateau(a, width());
        break;
    }
    case Family::IncreasingSaturating: {
        std::vector<SaturatingTerm> terms;
        const int n = count();
        for (int i = 0; i < n; ++i) {
            const double h = amplitude();
            terms.push_back({h, width()});
        }
        f = make_saturating_mixture(std::move(terms));
        break;
    }
    }
    f.id = tag.str();
    return f;
}

FlagCheck verify_flags(const TestFunction& f, int points, double radius, double h) {
    if (radius <= 0.0) {
        radius = std::max(5.0, f.negligible_radius(1e-14));
    }
    FlagCheck out;
    const double scale = std::max(1.0, f.sup_norm);
    for (int i = 0; i < points; ++i) {
        const double x = -radius + 2.0 * radius * (i + 0.5) / points;
        const double v = f.eval(x);
        const double d = f.deriv(x);
        if (f.even) {
            if (std::abs(f.eval(-x) - v) > 1e-14 * scale || std::abs(f.deriv(-x) + d) > 1e-13 * scale) {
                out.even = false;
            }
        }
        if (x > 0.0) {
            if (f.monotone_decreasing && d > 1e-15 * scale) {
                out.monotone = false;
            }
            if (f.monotone_increasing && d < -1e-15 * scale) {
                out.monotone = false;
            }
        }
        const double fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
        const double defect = std::abs(d - fd) / (1.0 + std::abs(d));
        out.max_derivative_defect = std::max(out.max_derivative_defect, defect);
        if (defect > 1e-6) {
            out.derivative = false;
        }
    }
    if (f.vanishes_at_origin && f.eval(0.0) != 0.0) {
        out.vanishing = false;
    }
    return out;
}

} // namespace ipm1d
