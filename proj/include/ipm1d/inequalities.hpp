#pragma once

#include "ipm1d/quadrature.hpp"
#include "ipm1d/testfunctions.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ipm1d {

/// Input outside the hypothesis class of the inequality being checked.
class HypothesisError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Explicit constants, exactly as stated. Each throws ParameterError outside
/// its parameter domain.
struct ConstantCatalog {
    /// (a^2/pi)(3 + sigma - 2 sqrt(2 + sigma)), sigma in (-1, 1)
    static double C_a_sigma(double a, double sigma);
    /// a^2 (3 + sigma - 2 sqrt(2 + sigma)) / (pi (a^2 + L^2))
    static double C_a_sigma_L(double a, double sigma, double L);
    /// ((1 + sigma) a^2 / ((p + 1) pi)) (1 - (2/(3 + sigma))^(1/p))^p, p > 1
    static double C_a_sigma_p(double a, double sigma, double p);
    /// c^2((1-c)^(p+1) q^s - 1) / (p (q-1) q^(s+2) (2 q^s (1-c)^(p+1) - 1)),
    /// only where (1-c)^(p+1) q^s > 1.
    static double C_prime_p_sigma(double p, double sigma, double q, double c);
    /// (2/pi)(4719 + 3/a^2)
    static double exp_defect(double a);
    /// sqrt((3 + 4719 a^2)(1 + 2 a^2))
    static double threshold_Jtilde(double a);
    /// 8 sup / ((1 - alpha)(3 + alpha))
    static double bound_F(double alpha, double sup_norm);
    /// (3x^2 + a^2) / (x^2 + a^2)^2
    static double omega(double a, double x);
    /// 9 / (8 a^2)
    static double omega_max(double a);
    /// c = (1 - q^(-sigma/(p+1))) / 2, half the feasibility bound.
    static double default_c(double p, double sigma, double q);
};

enum class InequalityId {
    PointwiseLower,
    WeightedMonotone,
    WeightedFiniteInterval,
    WeightedPowerP,
    WeightedSigma0,
    WeightedExponential,
    LocalVelocity,
    LocalNonlinear,
    GlobalIdentity,
    UpperBoundQ,
    KiselevIncreasing,
};

std::string to_string(InequalityId id);
InequalityId parse_inequality(const std::string& name);
const std::vector<InequalityId>& all_inequalities();

struct InequalityReport {
    InequalityId id = InequalityId::PointwiseLower;
    std::string function_id;
    std::optional<double> a, sigma, p, q, c, L, x, x1, x2;
    double lhs = 0.0;
    double rhs = 0.0;
    /// lhs - rhs for lower bounds, rhs - lhs for upper bounds, |lhs - rhs| for identities.
    double margin = 0.0;
    double quad_error = 0.0;
    bool pass = false;
    std::string note;
};

struct CheckOptions {
    /// Used for every H_a evaluation.
    quad::QuadratureSpec inner{};
    /// Used for the integrals over x.
    quad::QuadratureSpec outer = loose();
    /// Multiplies every catalog constant. Only for exercising the failure path.
    double constant_scale = 1.0;

    static quad::QuadratureSpec loose();
};

InequalityReport check_pointwise_lower(const TestFunction& f, double a, double x,
                                       const CheckOptions& opt = {});
InequalityReport check_ccf_weighted(const TestFunction& f, double a, double sigma,
                                    const CheckOptions& opt = {});
InequalityReport check_ccf_finite_interval(const TestFunction& f, double a, double sigma, double L,
                                           const CheckOptions& opt = {});
InequalityReport check_kiselev_p_smooth(const TestFunction& f, double a, double sigma, double p,
                                        const CheckOptions& opt = {});
InequalityReport check_sigma0_identity_bound(const TestFunction& f, double a,
                                             const CheckOptions& opt = {});
InequalityReport check_exponential_weighted(const TestFunction& f, double a,
                                            const CheckOptions& opt = {});
InequalityReport check_local_velocity_bound(const TestFunction& f, double a, double x1, double x2,
                                            const CheckOptions& opt = {});
InequalityReport check_local_nonlinear_upper(const TestFunction& f, double a, double x1,
                                             double x2, const CheckOptions& opt = {});
InequalityReport check_global_identity(const TestFunction& f, double a,
                                       const CheckOptions& opt = {});
InequalityReport check_upper_bound_q(const TestFunction& f, double a, double x, double q,
                                     const CheckOptions& opt = {});
InequalityReport check_kiselev_general(const TestFunction& f, double a, double sigma, double p,
                                       double q, double c, const CheckOptions& opt = {});

/// log((x1 - x2)/(x1 + x2) sqrt(((x1 + x2)^2 + a^2)/((x1 - x2)^2 + a^2))), negative.
double local_log_factor(double a, double x1, double x2);

struct SuiteConfig {
    std::vector<InequalityId> ids = all_inequalities();
    /// Function/parameter combinations per inequality.
    int per_inequality = 100;
    std::uint64_t seed = 1;
    std::vector<double> a_values{0.5, 1.0, 2.0};
    /// Restrict every suite to constant profiles.
    bool constants_only = false;
    int jobs = 1;
    CheckOptions options{};
};

/// Runs every selected check over its randomized hypothesis-conforming inputs.
/// Output order is by inequality id, then function id; independent of jobs.
std::vector<InequalityReport> run_suite(const SuiteConfig& cfg);

void write_csv(std::ostream& os, const std::vector<InequalityReport>& rows);

} // namespace ipm1d
