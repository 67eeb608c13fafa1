#pragma once

#include "ipm1d/grid.hpp"
#include "ipm1d/testfunctions.hpp"
#include "ipm1d/transform.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ipm1d {

/// Invalid simulation setup (including initial data that does not decay).
class ConfigError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

enum class StopReason { None, MaxTime, DtFloor, TailThreshold, NonFinite };
std::string to_string(StopReason r);

/// d_t rho + sign g H_a rho d_x rho + nu (-Laplacian)^(gamma/2) rho = 0 on [-L, L),
/// nu = 1 iff gamma is set; g = 0 is allowed here (pure dissipation).
struct SimConfig {
    TransformParams params{};
    int sign = -1;
    std::optional<double> gamma;
    double cfl = 0.5;
    double dt_floor = 1e-8;
    /// Upper cap on the step, for runs where the velocity is tiny.
    double max_dt = 0.05;
    double max_time = 1.0;
    double dealias_fraction = 2.0 / 3.0;
    /// Relative energy in the top tenth of the retained modes.
    double tail_threshold = 1e-12;
    double half_width = 40.0;
    int resolution = 4096;
    TestFunction initial = make_constant(0.0);

    void validate() const;
};

struct SimState {
    double time = 0.0;
    GridFunction rho;
    /// g H_a rho (with the periodic-image correction)
    GridFunction u;
    long steps = 0;
    StopReason stop = StopReason::None;
    /// Running trapezoidal integral of max |d_x rho| over the steps taken.
    double bkm = 0.0;
    double max_gradient = 0.0;
};

struct StepRecord {
    double time;
    double dt;
    double sup_norm;
    double mass; ///< dx * sum rho
    double max_gradient;
    double tail;
};

/// Fixed-configuration stepper. Caches the multiplier table and FFT plans.
class Solver {
public:
    explicit Solver(SimConfig cfg);

    const SimConfig& config() const { return cfg_; }
    SimState initialize() const;
    /// One integrating-factor RK4 step of size min(cfl dx / max|u|, max_dt, until - t).
    SimState step(const SimState& s, double until) const;
    SimState step(const SimState& s) const { return step(s, cfg_.max_time); }

    GridFunction velocity(const GridFunction& rho) const;
    double tail_energy(const GridFunction& rho) const;
    /// Dealiasing cut-off as a mode index.
    int cutoff() const { return cutoff_; }

private:
    Spectrum nonlinear(const Spectrum& rho_hat) const;

    SimConfig cfg_;
    MultiplierTable table_;
    std::vector<double> xi_;
    int cutoff_;
};

SimState initialize(const SimConfig& cfg);
SimState step(const SimState& s, const SimConfig& cfg);

struct RunResult {
    std::vector<SimState> snapshots;
    std::vector<StepRecord> steps;
    StopReason stop = StopReason::None;
};

/// Runs to max_time or a stop condition. Snapshots at t = 0, every
/// record_interval, and the final state.
RunResult run(const SimConfig& cfg, double record_interval);

/// t, x, rho, u, drho_dx per node.
void write_snapshot(std::ostream& os, const SimState& s);

} // namespace ipm1d
