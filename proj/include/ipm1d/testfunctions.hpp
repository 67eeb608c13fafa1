#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipm1d {

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An analytic profile with exact derivative and declared structural flags.
/// Immutable once built; safe to evaluate from several threads.
struct TestFunction {
    std::string id;
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    double sup_norm = 0.0;
    bool even = false;
    bool monotone_decreasing = false; ///< f' <= 0 on (0, inf)
    bool monotone_increasing = false; ///< f' >= 0 on (0, inf)
    bool vanishes_at_origin = false;
    /// Largest decay length of the profile (Gaussian width or exponential scale).
    double decay_rate = 1.0;
    /// Limit of f at +-inf.
    double far_field = 0.0;
    /// Bound on |f(y) - far_field| and |f'(y)| for |y| >= r.
    std::function<double(double)> tail_envelope;

    double operator()(double x) const { return eval(x); }
    double derivative(double x) const { return deriv(x); }
    /// Smallest radius (to within 1e-3 relative) beyond which the tail envelope is below eps.
    double negligible_radius(double eps) const;
    /// True when the derivative vanishes identically (sampled).
    bool is_constant() const;
};

TestFunction make_constant(double value);
TestFunction make_gaussian(double amplitude, double width);
/// Non-even Gaussian amplitude * exp(-((x - center)/width)^2).
TestFunction make_shifted_gaussian(double amplitude, double width, double center);
/// amplitude * sech(x/width)^2.
TestFunction make_sech(double amplitude, double width);
/// amplitude * exp(-(x/width)^4).
TestFunction make_plateau(double amplitude, double width);
/// height * (1 - exp(-(x/scale)^2)); f(0) = 0, f' >= 0 on (0, inf).
TestFunction make_increasing_saturating(double height, double scale);

struct GaussianTerm {
    double amplitude;
    double width;
    double center; ///< 0 for a centred bump; otherwise the even pair at +-center
};
TestFunction make_gaussian_mixture(std::vector<GaussianTerm> terms);

struct SaturatingTerm {
    double height;
    double scale;
};
TestFunction make_saturating_mixture(std::vector<SaturatingTerm> terms);

enum class Family { GaussianBump, GaussianMixture, SechProfile, Plateau, IncreasingSaturating };

std::string to_string(Family f);
Family parse_family(const std::string& name);

/// Recipe for a randomly drawn even profile. Widths are drawn in [0.2, 5],
/// amplitudes in [0.1, 3], offsets in [0.5, 3]; mixtures have 1..terms terms
/// (at most 5). Generation is deterministic for a fixed seed.
struct FunctionFamilySpec {
    Family family = Family::GaussianMixture;
    int terms = 3;
    bool off_center = false;
    /// Multiplies every drawn amplitude; 0 gives the zero function.
    double amplitude_scale = 1.0;
    std::uint64_t seed = 1;

    void validate() const;
};

TestFunction make_random_even(const FunctionFamilySpec& spec);

/// Outcome of sampling a TestFunction against its declared flags.
struct FlagCheck {
    bool even = true;
    bool monotone = true;
    bool vanishing = true;
    bool derivative = true;
    double max_derivative_defect = 0.0;

    bool all() const { return even && monotone && vanishing && derivative; }
};

/// Samples `points` abscissae in [-radius, radius] and checks every declared flag,
/// plus derivative consistency against centred differences with step h.
FlagCheck verify_flags(const TestFunction& f, int points = 10000, double radius = 0.0,
                       double h = 1e-4);

/// Uniform draws in [0, 1) from mt19937_64; the bit-to-double step is done here
/// because std::uniform_real_distribution output differs between vendors.
class Uniform {
public:
    explicit Uniform(std::uint64_t seed);
    double next();
    double in(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

} // namespace ipm1d
