#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipm1d::quad {

using Integrand = std::function<double(double)>;

/// Numerical-analysis knobs shared by every integrator in the project.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdivisions = 2000;
    /// Strictly decreasing excision half-widths for principal values.
    std::vector<double> pv_excision = default_excision();
    /// Length beyond which whole-line integrals are truncated.
    double truncation_radius = 50.0;

    /// eps_k = 2^-k, k = 4..20.
    static std::vector<double> default_excision();

    void validate() const;
    double target(double value) const;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;

    IntegralResult& operator+=(const IntegralResult& other);
    IntegralResult& operator*=(double scale);
};

IntegralResult operator+(IntegralResult lhs, const IntegralResult& rhs);
IntegralResult operator*(double scale, IntegralResult r);

/// Raised when an integrand returns NaN or infinity.
class NonFiniteIntegrand : public std::runtime_error {
public:
    explicit NonFiniteIntegrand(double abscissa);
    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

/// Raised when a weighted integral cannot be finite (integrand does not vanish
/// at a non-integrable weight singularity).
class DivergentIntegral : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Globally adaptive 21-point Gauss-Kronrod integration over [lo, hi].
/// Either limit may be infinite; infinite ranges are mapped onto finite ones by
/// x = lo + u/(1-u). Running out of subdivisions is not an error: the result
/// carries converged = false and the best estimate.
IntegralResult integrate_adaptive(const Integrand& f, double lo, double hi,
                                  const QuadratureSpec& spec = {});

/// Same as integrate_adaptive but splits the range at the given interior points.
IntegralResult integrate_piecewise(const Integrand& f, std::vector<double> points,
                                   const QuadratureSpec& spec = {});

/// Principal value of the integral of g over [lo, hi], where g has a simple
/// pole at `singularity`. Symmetric excision (s - eps, s + eps) over the
/// sequence spec.pv_excision followed by Richardson extrapolation eps -> 0.
/// The extrapolation residual is part of the reported error.
IntegralResult integrate_pv(const Integrand& g, double singularity, double lo, double hi,
                            const QuadratureSpec& spec = {});

enum class WeightKind {
    Power,        ///< x^-beta
    PowerShifted, ///< x^-beta (x^2 + a^2)^-1
    ExpOverX,     ///< e^-x / x
    OmegaOverSq,  ///< (3x^2 + a^2) / (x^2 (x^2 + a^2)^2)
    Eta,          ///< x^-alpha on (0,1), x^(-4-alpha) on [1, inf)
};

struct Weight {
    WeightKind kind = WeightKind::Power;
    double beta = 1.0;  ///< power exponent (Power, PowerShifted) or alpha (Eta)
    double a = 1.0;     ///< length scale (PowerShifted, OmegaOverSq)
    double upper = std::numeric_limits<double>::infinity();

    static Weight power(double beta, double upper = std::numeric_limits<double>::infinity());
    static Weight power_shifted(double beta, double a);
    static Weight exp_over_x();
    static Weight omega_over_sq(double a);
    static Weight eta(double alpha);

    double operator()(double x) const;
    /// log(w(e^t)) + t, the weight times the Jacobian of x = e^t, in log form.
    double log_weight_jacobian(double t) const;
    /// Order of the singularity at the origin: w(x) ~ x^-order.
    double origin_order() const;
};

/// Integral over (0, upper] of f(x) w(x), split at x = 1. Both pieces use
/// x = e^t, which turns power singularities at 0 and power tails into
/// exponentials. Throws DivergentIntegral when the weight is non-integrable at 0
/// and f(0) != 0.
IntegralResult integrate_weighted_halfline(const Integrand& f, const Weight& weight,
                                           const QuadratureSpec& spec = {});

} // namespace ipm1d::quad
