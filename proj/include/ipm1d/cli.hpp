#pragma once

#include "ipm1d/diagnostics.hpp"
#include "ipm1d/inequalities.hpp"
#include "ipm1d/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ipm1d::cli {

enum ExitCode : int { Ok = 0, Failed = 1, BadConfig = 2, IoError = 3 };

/// Malformed or inconsistent config text.
class ConfigParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int jobs = 1;
};

/// IPM1D_OUT if set and non-empty, else the flag value.
std::string resolve_out_dir(const std::string& flag);

/// Lower-case hex SHA-256 of the bytes of `text`.
std::string sha256_hex(const std::string& text);

struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 1;
    std::string artifact_version;
    std::vector<std::string> output_paths;
    std::optional<bool> overall_pass;
    std::string stop_reason;
    /// Excluded from the digest-stable part; written last.
    std::string timestamp;

    void write(std::ostream& os) const;
};

std::string artifact_version();

/// Flat INI text with sections [transform], [verify], [simulate] (and
/// [profile] keys inside them, see README). Unknown sections or keys are errors.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);
    const std::string& text() const { return text_; }

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get(const std::string& section, const std::string& key, double fallback) const;
    int get(const std::string& section, const std::string& key, int fallback) const;
    bool get(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;
    std::vector<std::string> get_names(const std::string& section, const std::string& key,
                                       const std::vector<std::string>& fallback) const;

private:
    std::string text_;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections_;
};

/// Profile from the `profile` key family of a section.
TestFunction profile_from(const Config& c, const std::string& section, std::uint64_t seed);
SimConfig sim_config_from(const Config& c, std::uint64_t seed);
SuiteConfig suite_config_from(const Config& c, std::uint64_t seed, int jobs);

int cmd_transform(const Options& opt, std::ostream& log);
int cmd_verify(const Options& opt, std::ostream& log);
int cmd_simulate(const Options& opt, std::ostream& log);
int cmd_reproduce(const std::string& id, const Options& opt, std::ostream& log);

/// Canned blow-up run for one criterion.
struct BlowupScenario {
    std::string name;
    SimConfig config;
    Criterion criterion = Criterion::Monotone;
    double parameter = 0.5;
    double record_interval = 0.01;
};

/// Monotone: sigma 0.75, Gaussian width 0.3. NonMonotone: a = g = 1, dip
/// -exp(-(x/w)^2) with Jtilde(0) 10% above threshold. Telescoping: alpha 0.5,
/// unit Gaussian.
BlowupScenario blowup_scenario(Criterion c);

/// Plus-sign dissipative run, gamma 0.25, data -exp(-x^2).
BlowupScenario dissipative_scenario();

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ScenarioReport {
    BlowupScenario scenario;
    RunResult run;
    DiagnosticSeries series;
    BlowupPrediction prediction;
    EnvelopeReport envelope;
    std::optional<EnvelopeReport> ode;
    std::vector<Check> checks;

    bool pass() const;
};

/// Runs the scenario and evaluates its consistency checks.
ScenarioReport evaluate_scenario(const BlowupScenario& s);

/// name,pass,detail
void write_checks(std::ostream& os, const std::vector<Check>& checks);
/// key,value rows of an envelope or ODE report.
void write_envelope(std::ostream& os, const EnvelopeReport& r);

struct ReproduceTarget {
    std::string id;
    std::vector<std::string> aliases;
    std::string description;
};
const std::vector<ReproduceTarget>& reproduce_targets();

} // namespace ipm1d::cli
