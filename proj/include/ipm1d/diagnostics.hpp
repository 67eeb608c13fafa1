#pragma once

#include "ipm1d/grid.hpp"
#include "ipm1d/solver.hpp"
#include "ipm1d/testfunctions.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ipm1d {

// Blow-up functionals of an even profile, from x >= 0 only:
//   J      = int (rho(0) - rho(x)) x^-(1+sigma) dx
//   Jtilde = int (rho(x) - rho(0)) e^-x / x dx
//   F      = int eta(x) (rho(0) - rho(x)) dx, eta = x^-alpha on (0,1), x^-(4+alpha) beyond.
// Grid versions use an even polynomial through the first three nodes on
// [0, dx], cubic interpolation with 8-point Gauss-Legendre on every other cell,
// and the closed-form weight integral beyond the domain edge.

double compute_J(const GridFunction& rho, double sigma);
double compute_Jtilde(const GridFunction& rho);
double compute_F(const GridFunction& rho, double alpha);

/// Same functionals of an analytic profile, by adaptive quadrature.
double compute_J(const TestFunction& f, double sigma);
double compute_Jtilde(const TestFunction& f);
double compute_F(const TestFunction& f, double alpha);

/// Jtilde of -exp(-(x/w)^2), as int_w^inf (1 - M(s))/s ds with
/// M(s) = (sqrt(pi) s/2) e^(s^2/4) erfc(s/2). Usable for any w > 0.
double gaussian_dip_Jtilde(double w);
/// Width w with gaussian_dip_Jtilde(w) = target (target > 0).
double gaussian_dip_width(double target);

struct DyadicSum {
    /// Closed-form k < 0 part + partial sum over 0 <= k < terms + midpoint of the remainder bracket.
    double value = 0.0;
    double partial = 0.0;
    /// Half-width of the bracket on the k >= terms remainder.
    double tail_bound = 0.0;
    /// Upper bound on the omitted terms themselves (no bracketing).
    double omitted_upper = 0.0;
    /// Ratio of consecutive terms at the cut-off; < 1 means geometric domination.
    double ratio = 0.0;
    int terms = 0;
};

/// c_{a,alpha} of the telescoping argument. The remainder uses
/// 1/e + 1/2 - e/12 <= 1/log(1+e) <= 1/e + 1/2 for 0 < e < 8.
DyadicSum dyadic_series_constant(double a, double alpha, int terms);

/// phi of the telescoping argument: 1/(3+alpha) + (1 - x^(1-alpha))/(1-alpha) on (0,1), x^-(3+alpha)/(3+alpha) beyond.
double telescoping_phi(double x, double alpha);

enum class Criterion { Monotone, NonMonotone, Telescoping };
std::string to_string(Criterion c);
/// "monotone", "exponential" or "telescoping".
Criterion parse_criterion(const std::string& name);

struct BlowupPrediction {
    Criterion criterion = Criterion::Monotone;
    bool hypothesis_met = false;
    double threshold = 0.0;
    double initial = 0.0;
    std::optional<double> predicted_time;
    /// Comparison ODE y' >= c1 y^2 - c2.
    double c1 = 0.0;
    double c2 = 0.0;
    /// sigma (monotone) or alpha (telescoping); unused otherwise.
    double parameter = 0.0;
    std::string note;
};

/// Monotone: J(0) > (2 sqrt2 / sigma) |rho0|, sign -1, parameter = sigma.
/// NonMonotone: Jtilde(0) > sqrt((3 + 4719 a^2)(1 + 2a^2)) |rho0|, sign +1.
/// Telescoping: F(0) > 0, sign -1, parameter = alpha, escape time 4 pi c / (g F(0)).
/// Throws ConfigError when the model sign does not match.
BlowupPrediction predict_blowup(const GridFunction& rho0, const SimConfig& cfg, Criterion criterion,
                                double parameter = 0.5);

/// Riccati escape time of y' = c1 y^2 - c2 from y0 > sqrt(c2/c1).
std::optional<double> riccati_escape_time(double c1, double c2, double y0);
/// Solution of y' = c1 y^2 - c2, y(0) = y0 (infinite past the escape time).
double riccati_solution(double c1, double c2, double y0, double t);

struct FunctionalRecord {
    double time;
    double J;
    double Jtilde;
    double F;
    double bkm;
    double sup_norm;
    double max_gradient;
};

struct DiagnosticSeries {
    double sigma = 0.5;
    double alpha = 0.5;
    std::vector<FunctionalRecord> records;
    std::string stop_reason;
};

DiagnosticSeries evaluate_series(const std::vector<SimState>& snapshots, double sigma, double alpha);

struct EnvelopeReport {
    bool checked = false;
    int points = 0;
    int violations = 0;
    std::optional<double> first_violation;
    double band = 0.1;
    std::string note;
};

/// Measured functional against the comparison ODE started at the measured
/// initial value: violation when measured < envelope - band |envelope|.
EnvelopeReport envelope_compare(const DiagnosticSeries& series, const BlowupPrediction& prediction,
                                double band = 0.1);

/// Centred differences of the functional against c1 y^2 - c2 at interior
/// records: violation when dy/dt < bound - band |bound|.
EnvelopeReport ode_consistency(const DiagnosticSeries& series, const BlowupPrediction& prediction,
                               double band = 0.1);

/// t, J, Jtilde, F, bkm, sup_norm, max_gradient
void write_series(std::ostream& os, const DiagnosticSeries& s);
/// key,value lines: criterion, hypothesis-met, threshold, initial, predicted-time, c1, c2
void write_prediction(std::ostream& os, const BlowupPrediction& p);

} // namespace ipm1d
