#include "ipm1d/cli.hpp"

#include "ipm1d/format.hpp"
#include "ipm1d/transform.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#ifndef IPM1D_VERSION
#define IPM1D_VERSION "0.0.0"
#endif

namespace ipm1d::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kProfileKeys{"profile", "amplitude", "width",  "center",          "value", "height",
                                         "scale",   "family",    "terms",  "off_center",      "amplitude_scale"};

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = [] {
        std::map<std::string, std::set<std::string>> k;
        k["transform"] = {"a_values", "points", "routes", "g", "abs_tol", "rel_tol", "truncation_radius", "tolerance",
                          "golden", "golden_tolerance", "seed"};
        k["verify"] = {"ids", "per_inequality", "a_values", "constants_only", "constant_scale", "seed"};
        k["simulate"] = {"a",          "g",          "sign",      "gamma",          "cfl",          "dt_floor",
                         "max_dt",     "max_time",   "dealias_fraction", "tail_threshold", "half_width", "resolution",
                         "record_interval", "criteria", "sigma", "alpha",   "snapshots",    "seed"};
        for (const char* s : {"transform", "simulate"}) {
            k[s].insert(kProfileKeys.begin(), kProfileKeys.end());
        }
        return k;
    }();
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double to_double(const std::string& v, const std::string& what) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigParseError(what + ": not a number: '" + v + "'");
    }
    if (used != v.size()) {
        throw ConfigParseError(what + ": not a number: '" + v + "'");
    }
    return d;
}

void write_file(const fs::path& path, const std::string& body, std::vector<std::string>& outputs) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) {
        throw fs::filesystem_error("cannot write", path, std::make_error_code(std::errc::io_error));
    }
    outputs.push_back(path.string());
}

template <class F>
std::string render(F&& f) {
    std::ostringstream os;
    f(os);
    return os.str();
}

std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

Config load_or_empty(const Options& opt) {
    return opt.config_path.empty() ? Config::parse("") : Config::load(opt.config_path);
}

std::uint64_t seed_of(const Options& opt, const Config& c, const std::string& section) {
    if (opt.seed) {
        return *opt.seed;
    }
    const double s = c.get(section, "seed", 1.0);
    if (s < 0.0 || s != std::floor(s)) {
        throw ConfigParseError(section + ".seed must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(s);
}

RunManifest manifest_for(const std::string& command, const Config& c, std::uint64_t seed) {
    RunManifest m;
    m.command = command;
    m.config_digest = sha256_hex(c.text());
    m.seed = seed;
    m.artifact_version = artifact_version();
    m.timestamp = now_utc();
    return m;
}

void finish(const fs::path& dir, RunManifest& m) {
    m.output_paths.push_back((dir / "manifest.txt").string());
    std::ofstream out(dir / "manifest.txt", std::ios::binary);
    m.write(out);
    if (!out) {
        throw fs::filesystem_error("cannot write", dir / "manifest.txt", std::make_error_code(std::errc::io_error));
    }
}

template <class F>
int guarded(std::ostream& log, F&& body) {
    try {
        return body();
    } catch (const ConfigParseError& e) {
        log << "config error: " << e.what() << '\n';
        return BadConfig;
    } catch (const ParameterError& e) {
        log << "config error: " << e.what() << '\n';
        return BadConfig;
    } catch (const fs::filesystem_error& e) {
        log << "i/o error: " << e.what() << '\n';
        return IoError;
    }
}

// ---- scenarios -----------------------------------------------------------

bool graceful(StopReason r) { return r != StopReason::NonFinite; }

Check sup_preserved(const RunResult& r, double until) {
    const double s0 = r.snapshots.front().rho.sup_norm();
    double worst = 0.0;
    for (const SimState& s : r.snapshots) {
        if (s.time <= until) {
            worst = std::max(worst, std::abs(s.rho.sup_norm() - s0));
        }
    }
    return {"sup-norm preserved", worst <= 1e-5 * s0, "max drift " + fmt17(worst / std::max(s0, 1e-300))};
}

Check evenness(const RunResult& r) {
    const double s0 = std::max(r.snapshots.front().rho.sup_norm(), 1e-300);
    double worst = 0.0;
    for (const SimState& s : r.snapshots) {
        worst = std::max(worst, s.rho.even_defect());
    }
    return {"evenness preserved", worst <= 1e-8 * s0, "max defect " + fmt17(worst / s0)};
}

Check monotonicity(const RunResult& r) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const SimState& s : r.snapshots) {
        const int o = s.rho.origin();
        for (int j = o; j < o + s.rho.size() / 4; ++j) {
            worst = std::max(worst, s.rho[j + 1] - s.rho[j]);
        }
    }
    return {"monotone on (0, L/2)", worst <= 1e-6, "max forward difference " + fmt17(worst)};
}

Check bkm_monotone(const DiagnosticSeries& s) {
    bool ok = true;
    for (std::size_t i = 1; i < s.records.size(); ++i) {
        ok = ok && s.records[i].bkm >= s.records[i - 1].bkm;
    }
    return {"bkm non-decreasing", ok, ""};
}

Check stop_check(const RunResult& r) {
    return {"graceful stop", graceful(r.stop), "stop " + to_string(r.stop) + " at t=" +
                                                   fmt17(r.snapshots.back().time)};
}

void monotone_checks(ScenarioReport& rep) {
    auto& c = rep.checks;
    c.push_back({"hypothesis met", rep.prediction.hypothesis_met,
                 "J(0)=" + fmt17(rep.prediction.initial) + " threshold=" + fmt17(rep.prediction.threshold)});
    c.push_back(stop_check(rep.run));
    c.push_back({"ode consistency", rep.ode->checked && rep.ode->violations == 0 && rep.ode->points >= 3,
                 std::to_string(rep.ode->points) + " points, " + std::to_string(rep.ode->violations) + " violations"});
    c.push_back({"envelope domination", rep.envelope.checked && rep.envelope.violations == 0,
                 std::to_string(rep.envelope.violations) + " violations"});
    c.push_back(sup_preserved(rep.run, rep.run.snapshots.back().time));
    c.push_back(evenness(rep.run));
    c.push_back(monotonicity(rep.run));
    c.push_back(bkm_monotone(rep.series));
}

void exponential_checks(ScenarioReport& rep) {
    auto& c = rep.checks;
    const SimConfig& cfg = rep.scenario.config;
    const double a = cfg.params.a;
    const double ratio = ConstantCatalog::threshold_Jtilde(a);
    // constructed profile value, by the closed-form oracle
    const double w = gaussian_dip_width(1.1 * ratio);
    const double profile_value = gaussian_dip_Jtilde(w);
    const auto t_star = riccati_escape_time(rep.prediction.c1, rep.prediction.c2, profile_value);
    c.push_back({"profile hypothesis", profile_value > ratio,
                 "Jtilde(0)=" + fmt17(profile_value) + " threshold=" + fmt17(ratio) + " width=" + fmt17(w)});
    c.push_back({"grid hypothesis", rep.prediction.hypothesis_met,
                 "grid Jtilde(0)=" + fmt17(rep.prediction.initial) + " threshold=" + fmt17(rep.prediction.threshold)});
    c.push_back({"finite t*", t_star.has_value(), "t*=" + fmt17(t_star)});
    const SimState& last = rep.run.snapshots.back();
    c.push_back({"blow-up stop", rep.run.stop == StopReason::TailThreshold || rep.run.stop == StopReason::DtFloor,
                 "stop " + to_string(rep.run.stop)});
    c.push_back({"stop before 1.5 t*", t_star && last.time <= 1.5 * *t_star,
                 "t_stop=" + fmt17(last.time) + " bound=" + fmt17(t_star ? std::optional(1.5 * *t_star) : std::nullopt)});
    const double g0 = rep.run.snapshots.front().max_gradient;
    double gmax = 0.0;
    for (const SimState& s : rep.run.snapshots) {
        gmax = std::max(gmax, s.max_gradient);
    }
    c.push_back({"max-gradient grows 10x", gmax >= 10.0 * g0, "from " + fmt17(g0) + " to " + fmt17(gmax)});
    c.push_back(sup_preserved(rep.run, 0.9 * last.time));
    c.push_back({"envelope domination", rep.envelope.checked && rep.envelope.violations == 0,
                 std::to_string(rep.envelope.violations) + " violations" +
                     (rep.envelope.note.empty() ? "" : "; " + rep.envelope.note)});
}

void telescoping_checks(ScenarioReport& rep) {
    auto& c = rep.checks;
    const double alpha = rep.scenario.parameter;
    const DyadicSum d = dyadic_series_constant(rep.scenario.config.params.a, alpha, 60);
    c.push_back({"dyadic tail bound", d.tail_bound <= 1e-10,
                 "c=" + fmt17(d.value) + " tail=" + fmt17(d.tail_bound) + " ratio=" + fmt17(d.ratio)});
    c.push_back({"hypothesis met", rep.prediction.hypothesis_met, "F(0)=" + fmt17(rep.prediction.initial)});
    c.push_back({"finite escape bound", rep.prediction.predicted_time.has_value(),
                 "T=" + fmt17(rep.prediction.predicted_time)});
    c.push_back(stop_check(rep.run));
    const double bound = ConstantCatalog::bound_F(alpha, rep.run.snapshots.front().rho.sup_norm());
    double fmax = -std::numeric_limits<double>::infinity();
    bool increasing = true;
    for (std::size_t i = 0; i < rep.series.records.size(); ++i) {
        const double f = rep.series.records[i].F;
        fmax = std::max(fmax, std::abs(f));
        if (i > 0) {
            increasing = increasing && f >= rep.series.records[i - 1].F - 1e-12 * std::abs(f);
        }
    }
    c.push_back({"F within a-priori bound", fmax <= bound, "max |F|=" + fmt17(fmax) + " bound=" + fmt17(bound)});
    c.push_back({"F non-decreasing", increasing, ""});
    c.push_back({"envelope domination", rep.envelope.checked && rep.envelope.violations == 0,
                 std::to_string(rep.envelope.violations) + " violations"});
    c.push_back(sup_preserved(rep.run, rep.run.snapshots.back().time));
    c.push_back(evenness(rep.run));
}

void dissipative_checks(ScenarioReport& rep) {
    auto& c = rep.checks;
    c.push_back(stop_check(rep.run));
    const double s0 = rep.run.snapshots.front().rho.sup_norm();
    double worst = 0.0;
    for (const SimState& s : rep.run.snapshots) {
        worst = std::max(worst, s.rho.sup_norm() - s0);
    }
    c.push_back({"sup-norm non-increasing", worst <= 1e-5 * s0, "max excess " + fmt17(worst / s0)});
    c.push_back(evenness(rep.run));
    bool mean_ok = true;
    for (std::size_t i = 1; i < rep.run.steps.size(); ++i) {
        mean_ok = mean_ok && rep.run.steps[i].mass >= rep.run.steps[i - 1].mass - 1e-8;
    }
    c.push_back({"mean non-decreasing", mean_ok,
                 "mass " + fmt17(rep.run.steps.front().mass) + " -> " + fmt17(rep.run.steps.back().mass)});
    c.push_back(bkm_monotone(rep.series));
    c.push_back({"hypothesis (informational)", true,
                 "Jtilde(0)=" + fmt17(rep.prediction.initial) + " threshold=" + fmt17(rep.prediction.threshold)});
}

// ---- reproduce targets ---------------------------------------------------

struct InequalityAlias {
    InequalityId id;
    const char* alias;
};

const std::vector<InequalityAlias>& inequality_aliases() {
    static const std::vector<InequalityAlias> v{
        {InequalityId::PointwiseLower, "prop-3.1"},     {InequalityId::WeightedMonotone, "prop-3.2"},
        {InequalityId::WeightedFiniteInterval, "remark-3.3"}, {InequalityId::WeightedPowerP, "prop-3.4"},
        {InequalityId::WeightedSigma0, "prop-3.5"},     {InequalityId::WeightedExponential, "prop-3.6"},
        {InequalityId::LocalVelocity, "lemma-4.1"},     {InequalityId::LocalNonlinear, "lemma-4.2"},
        {InequalityId::GlobalIdentity, "remark-4.3"},   {InequalityId::UpperBoundQ, "cor-5.3"},
        {InequalityId::KiselevIncreasing, "prop-5.1"},
    };
    return v;
}

std::string canonical_target(const std::string& id) {
    for (const ReproduceTarget& t : reproduce_targets()) {
        if (t.id == id || std::find(t.aliases.begin(), t.aliases.end(), id) != t.aliases.end()) {
            return t.id;
        }
    }
    return "";
}

void write_run_outputs(const fs::path& dir, const RunResult& r, const DiagnosticSeries& series, bool snapshots,
                       std::vector<std::string>& outputs) {
    write_file(dir / "diagnostics.csv", render([&](std::ostream& os) { write_series(os, series); }), outputs);
    write_file(dir / "steps.csv", render([&](std::ostream& os) {
                   os << "t,dt,sup_norm,mass,max_gradient,tail\n";
                   for (const StepRecord& s : r.steps) {
                       os << fmt17(s.time) << ',' << fmt17(s.dt) << ',' << fmt17(s.sup_norm) << ',' << fmt17(s.mass)
                          << ',' << fmt17(s.max_gradient) << ',' << fmt17(s.tail) << '\n';
                   }
               }),
               outputs);
    std::ostringstream index;
    index << "index,t,file,stop_reason\n";
    if (snapshots) {
        fs::create_directories(dir / "snapshots");
    }
    for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
        const fs::path rel = fs::path("snapshots") / name;
        if (snapshots) {
            write_file(dir / rel, render([&](std::ostream& os) { write_snapshot(os, r.snapshots[i]); }), outputs);
        }
        index << i << ',' << fmt17(r.snapshots[i].time) << ',' << (snapshots ? rel.string() : "") << ','
              << to_string(r.snapshots[i].stop) << '\n';
    }
    write_file(dir / "snapshots.csv", index.str(), outputs);
}

} // namespace

std::string resolve_out_dir(const std::string& flag) {
    const char* env = std::getenv("IPM1D_OUT");
    return env && *env ? std::string(env) : flag;
}

std::string sha256_hex(const std::string& text) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return os.str();
}

std::string artifact_version() { return IPM1D_VERSION; }

void RunManifest::write(std::ostream& os) const {
    os << "command: " << command << '\n';
    os << "config-digest: sha256:" << config_digest << '\n';
    os << "seed: " << seed << '\n';
    os << "artifact-version: " << artifact_version << '\n';
    if (!stop_reason.empty()) {
        os << "stop-reason: " << stop_reason << '\n';
    }
    os << "overall-pass: " << (overall_pass ? (*overall_pass ? "true" : "false") : "") << '\n';
    for (const std::string& p : output_paths) {
        os << "output: " << p << '\n';
    }
    os << "timestamp: " << timestamp << '\n';
}

// ---- config --------------------------------------------------------------

Config Config::parse(const std::string& text) {
    Config c;
    c.text_ = text;
    // '#' comments are accepted in addition to the parser's ';'
    std::istringstream in(text);
    std::ostringstream cleaned;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (!t.empty() && t[0] == '#') {
            continue;
        }
        cleaned << line << '\n';
    }
    boost::property_tree::ptree pt;
    std::istringstream cs(cleaned.str());
    try {
        boost::property_tree::ini_parser::read_ini(cs, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigParseError(e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    const auto& known = known_keys();
    for (const auto& [section, body] : pt) {
        if (!body.data().empty() && body.empty()) {
            throw ConfigParseError("key '" + section + "' outside a section");
        }
        const auto it = known.find(section);
        if (it == known.end()) {
            throw ConfigParseError("unknown section [" + section + "] (expected transform, verify, simulate)");
        }
        std::vector<std::pair<std::string, std::string>> kv;
        for (const auto& [key, value] : body) {
            if (!it->second.count(key)) {
                throw ConfigParseError("unknown key '" + key + "' in [" + section + "]");
            }
            kv.emplace_back(key, trim(value.data()));
        }
        c.sections_.emplace_back(section, std::move(kv));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigParseError("cannot read config file '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
    for (const auto& [s, kv] : sections_) {
        if (s == section) {
            for (const auto& [k, v] : kv) {
                if (k == key) {
                    return true;
                }
            }
        }
    }
    return false;
}

std::string Config::get(const std::string& section, const std::string& key, const std::string& fallback) const {
    for (const auto& [s, kv] : sections_) {
        if (s == section) {
            for (const auto& [k, v] : kv) {
                if (k == key) {
                    return v;
                }
            }
        }
    }
    return fallback;
}

double Config::get(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? to_double(get(section, key, std::string()), section + "." + key) : fallback;
}

int Config::get(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    const double d = to_double(get(section, key, std::string()), section + "." + key);
    if (d != std::floor(d) || std::abs(d) > 1e9) {
        throw ConfigParseError(section + "." + key + " must be an integer");
    }
    return static_cast<int>(d);
}

bool Config::get(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    const std::string v = get(section, key, std::string());
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw ConfigParseError(section + "." + key + " must be true or false");
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    std::vector<double> out;
    for (const std::string& s : split_list(get(section, key, std::string()))) {
        out.push_back(to_double(s, section + "." + key));
    }
    if (out.empty()) {
        throw ConfigParseError(section + "." + key + " is empty");
    }
    return out;
}

std::vector<std::string> Config::get_names(const std::string& section, const std::string& key,
                                           const std::vector<std::string>& fallback) const {
    return has(section, key) ? split_list(get(section, key, std::string())) : fallback;
}

TestFunction profile_from(const Config& c, const std::string& s, std::uint64_t seed) {
    const std::string kind = c.get(s, "profile", std::string("gaussian"));
    const double amplitude = c.get(s, "amplitude", 1.0);
    const double width = c.get(s, "width", 1.0);
    if (kind == "constant") {
        return make_constant(c.get(s, "value", 0.0));
    }
    if (kind == "gaussian") {
        return make_gaussian(amplitude, width);
    }
    if (kind == "shifted-gaussian") {
        return make_shifted_gaussian(amplitude, width, c.get(s, "center", 0.0));
    }
    if (kind == "sech") {
        return make_sech(amplitude, width);
    }
    if (kind == "plateau") {
        return make_plateau(amplitude, width);
    }
    if (kind == "increasing-saturating") {
        return make_increasing_saturating(c.get(s, "height", 1.0), c.get(s, "scale", 1.0));
    }
    if (kind == "random") {
        FunctionFamilySpec spec;
        spec.family = parse_family(c.get(s, "family", std::string("gaussian-mixture")));
        spec.terms = c.get(s, "terms", 3);
        spec.off_center = c.get(s, "off_center", false);
        spec.amplitude_scale = c.get(s, "amplitude_scale", 1.0);
        spec.seed = seed;
        return make_random_even(spec);
    }
    throw ConfigParseError("unknown profile '" + kind +
                           "' (constant, gaussian, shifted-gaussian, sech, plateau, increasing-saturating, random)");
}

SimConfig sim_config_from(const Config& c, std::uint64_t seed) {
    const std::string s = "simulate";
    SimConfig cfg;
    cfg.params.a = c.get(s, "a", cfg.params.a);
    cfg.params.g = c.get(s, "g", cfg.params.g);
    cfg.sign = c.get(s, "sign", cfg.sign);
    if (c.has(s, "gamma")) {
        cfg.gamma = c.get(s, "gamma", 0.0);
    }
    cfg.cfl = c.get(s, "cfl", cfg.cfl);
    cfg.dt_floor = c.get(s, "dt_floor", cfg.dt_floor);
    cfg.max_dt = c.get(s, "max_dt", cfg.max_dt);
    cfg.max_time = c.get(s, "max_time", cfg.max_time);
    cfg.dealias_fraction = c.get(s, "dealias_fraction", cfg.dealias_fraction);
    cfg.tail_threshold = c.get(s, "tail_threshold", cfg.tail_threshold);
    cfg.half_width = c.get(s, "half_width", cfg.half_width);
    cfg.resolution = c.get(s, "resolution", cfg.resolution);
    cfg.initial = c.has(s, "profile") ? profile_from(c, s, seed) : make_gaussian(1.0, 1.0);
    cfg.validate();
    return cfg;
}

SuiteConfig suite_config_from(const Config& c, std::uint64_t seed, int jobs) {
    const std::string s = "verify";
    SuiteConfig cfg;
    const auto ids = c.get_names(s, "ids", {"all"});
    if (!(ids.size() == 1 && ids[0] == "all")) {
        cfg.ids.clear();
        for (const std::string& id : ids) {
            cfg.ids.push_back(parse_inequality(id));
        }
    }
    cfg.per_inequality = c.get(s, "per_inequality", cfg.per_inequality);
    if (cfg.per_inequality < 1) {
        throw ConfigParseError("verify.per_inequality must be positive");
    }
    cfg.a_values = c.get_list(s, "a_values", cfg.a_values);
    cfg.constants_only = c.get(s, "constants_only", false);
    cfg.options.constant_scale = c.get(s, "constant_scale", 1.0);
    cfg.seed = seed;
    cfg.jobs = std::max(1, jobs);
    return cfg;
}

// ---- commands ------------------------------------------------------------

int cmd_transform(const Options& opt, std::ostream& log) {
    return guarded(log, [&] {
        const Config c = load_or_empty(opt);
        const std::string s = "transform";
        const std::uint64_t seed = seed_of(opt, c, s);
        const TestFunction f = profile_from(c, s, seed);
        const std::vector<double> a_values = c.get_list(s, "a_values", {0.5, 1.0, 2.0});
        const std::vector<double> points = c.get_list(s, "points", {0.1, 0.5, 1.0, 2.0, 4.0});
        std::vector<Route> routes;
        for (const std::string& r : c.get_names(s, "routes", {"pv", "even", "logkernel", "split"})) {
            routes.push_back(parse_route(r));
        }
        if (!f.even) {
            const auto drop = std::remove_if(routes.begin(), routes.end(),
                                             [](Route r) { return r == Route::Even || r == Route::Split; });
            if (drop != routes.end()) {
                log << "profile " << f.id << " is not even; even and split routes skipped\n";
                routes.erase(drop, routes.end());
            }
        }
        QuadratureSpec q;
        q.abs_tol = c.get(s, "abs_tol", q.abs_tol);
        q.rel_tol = c.get(s, "rel_tol", q.rel_tol);
        q.truncation_radius = c.get(s, "truncation_radius", q.truncation_radius);
        q.validate();
        const double tol = c.get(s, "tolerance", 1e-6);
        const double g = c.get(s, "g", 1.0);

        const fs::path dir = resolve_out_dir(opt.out_dir);
        fs::create_directories(dir);
        RunManifest m = manifest_for("transform", c, seed);
        bool pass = true;

        std::ostringstream values;
        std::ostringstream summary;
        values << "route,a,x,value,error\n";
        summary << "a,x,max_discrepancy,tolerance,pass\n";
        for (double a : a_values) {
            const TransformParams p{a, g};
            p.validate();
            for (double x : points) {
                std::vector<double> v;
                for (Route r : routes) {
                    const IntegralResult res = ha(r, f, p, x, q);
                    values << to_string(r) << ',' << fmt17(a) << ',' << fmt17(x) << ',' << fmt17(res.value) << ','
                           << fmt17(res.error) << '\n';
                    v.push_back(res.value);
                }
                double spread = 0.0;
                double scale = 0.0;
                for (double u : v) {
                    scale = std::max(scale, std::abs(u));
                    for (double w : v) {
                        spread = std::max(spread, std::abs(u - w));
                    }
                }
                const bool ok = spread <= tol * (1.0 + scale);
                pass = pass && ok;
                summary << fmt17(a) << ',' << fmt17(x) << ',' << fmt17(spread) << ',' << fmt17(tol) << ','
                        << (ok ? "true" : "false") << '\n';
                if (!ok) {
                    log << "route disagreement at a=" << fmt17(a) << " x=" << fmt17(x) << ": " << fmt17(spread)
                        << '\n';
                }
            }
        }
        write_file(dir / "transform.csv", values.str(), m.output_paths);
        write_file(dir / "transform_summary.csv", summary.str(), m.output_paths);

        if (c.has(s, "golden")) {
            const std::string path = c.get(s, "golden", std::string());
            std::ifstream in(path);
            if (!in) {
                throw ConfigParseError("cannot read golden file '" + path + "'");
            }
            const double gtol = c.get(s, "golden_tolerance", 1e-9);
            std::ostringstream out;
            out << "route,width,a,x,value,golden,pass\n";
            std::string line;
            std::getline(in, line);
            int rows = 0;
            while (std::getline(in, line)) {
                const auto cols = split_list(line);
                if (cols.size() != 4) {
                    throw ConfigParseError("golden file rows need width,a,x,value");
                }
                const double w = to_double(cols[0], "golden width");
                const double a = to_double(cols[1], "golden a");
                const double x = to_double(cols[2], "golden x");
                const double ref = to_double(cols[3], "golden value");
                const TestFunction gf = make_gaussian(1.0, w);
                for (Route r : {Route::PV, Route::Even, Route::LogKernel, Route::Split}) {
                    const double v = ha(r, gf, {a, 1.0}, x, q).value;
                    const bool ok = std::abs(v - ref) <= gtol * (1.0 + std::abs(ref));
                    pass = pass && ok;
                    out << to_string(r) << ',' << fmt17(w) << ',' << fmt17(a) << ',' << fmt17(x) << ',' << fmt17(v)
                        << ',' << fmt17(ref) << ',' << (ok ? "true" : "false") << '\n';
                }
                ++rows;
            }
            log << "golden rows checked: " << rows << '\n';
            write_file(dir / "transform_golden.csv", out.str(), m.output_paths);
        }
        m.overall_pass = pass;
        finish(dir, m);
        log << "transform: " << (pass ? "pass" : "FAIL") << '\n';
        return pass ? Ok : Failed;
    });
}

int cmd_verify(const Options& opt, std::ostream& log) {
    return guarded(log, [&] {
        const Config c = load_or_empty(opt);
        const std::uint64_t seed = seed_of(opt, c, "verify");
        const SuiteConfig cfg = suite_config_from(c, seed, opt.jobs);
        const std::vector<InequalityReport> rows = run_suite(cfg);
        const fs::path dir = resolve_out_dir(opt.out_dir);
        fs::create_directories(dir);
        RunManifest m = manifest_for("verify", c, seed);
        write_file(dir / "verify.csv", render([&](std::ostream& os) { write_csv(os, rows); }), m.output_paths);
        const long failed = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.pass; });
        m.overall_pass = failed == 0;
        finish(dir, m);
        log << "verify: " << rows.size() - failed << "/" << rows.size() << " rows pass\n";
        return failed == 0 ? Ok : Failed;
    });
}

int cmd_simulate(const Options& opt, std::ostream& log) {
    return guarded(log, [&] {
        const Config c = load_or_empty(opt);
        const std::string s = "simulate";
        const std::uint64_t seed = seed_of(opt, c, s);
        const SimConfig cfg = sim_config_from(c, seed);
        const double interval = c.get(s, "record_interval", 0.1);
        const double sigma = c.get(s, "sigma", 0.5);
        const double alpha = c.get(s, "alpha", 0.5);
        std::vector<Criterion> criteria;
        for (const std::string& n : c.get_names(s, "criteria", {})) {
            criteria.push_back(parse_criterion(n));
        }
        const Solver probe(cfg);
        const SimState init = probe.initialize();
        std::vector<BlowupPrediction> predictions;
        for (Criterion k : criteria) {
            predictions.push_back(predict_blowup(init.rho, cfg, k, k == Criterion::Monotone ? sigma : alpha));
        }

        const RunResult r = run(cfg, interval);
        const DiagnosticSeries series = evaluate_series(r.snapshots, sigma, alpha);
        const fs::path dir = resolve_out_dir(opt.out_dir);
        fs::create_directories(dir);
        RunManifest m = manifest_for("simulate", c, seed);
        m.stop_reason = to_string(r.stop);
        write_run_outputs(dir, r, series, c.get(s, "snapshots", true), m.output_paths);
        for (const BlowupPrediction& p : predictions) {
            const std::string name = to_string(p.criterion);
            write_file(dir / ("prediction_" + name + ".csv"),
                       render([&](std::ostream& os) { write_prediction(os, p); }), m.output_paths);
            write_file(dir / ("envelope_" + name + ".csv"),
                       render([&](std::ostream& os) { write_envelope(os, envelope_compare(series, p)); }),
                       m.output_paths);
            if (p.criterion == Criterion::Monotone) {
                write_file(dir / ("ode_" + name + ".csv"),
                           render([&](std::ostream& os) { write_envelope(os, ode_consistency(series, p)); }),
                           m.output_paths);
            }
        }
        finish(dir, m);
        log << "simulate: stop " << to_string(r.stop) << " at t=" << fmt17(r.snapshots.back().time) << " after "
            << r.snapshots.back().steps << " steps\n";
        return Ok;
    });
}

int cmd_reproduce(const std::string& id, const Options& opt, std::ostream& log) {
    const std::string target = canonical_target(id);
    if (target.empty()) {
        log << "unknown reproduce id '" << id << "'; known ids:\n";
        for (const ReproduceTarget& t : reproduce_targets()) {
            log << "  " << t.id;
            for (const std::string& a : t.aliases) {
                log << ", " << a;
            }
            log << "  " << t.description << '\n';
        }
        return BadConfig;
    }
    return guarded(log, [&] {
        const fs::path dir = fs::path(resolve_out_dir(opt.out_dir)) / target;
        fs::create_directories(dir);
        const Config empty = Config::parse("");
        const std::uint64_t seed = opt.seed.value_or(1);
        RunManifest m = manifest_for("reproduce " + target, empty, seed);
        bool pass = true;
        std::vector<Check> checks;

        std::optional<BlowupScenario> scenario;
        if (target == "monotone-blowup") {
            scenario = blowup_scenario(Criterion::Monotone);
        } else if (target == "exponential-blowup") {
            scenario = blowup_scenario(Criterion::NonMonotone);
        } else if (target == "telescoping-blowup") {
            scenario = blowup_scenario(Criterion::Telescoping);
        } else if (target == "dissipative") {
            scenario = dissipative_scenario();
        }

        if (scenario) {
            const ScenarioReport rep = evaluate_scenario(*scenario);
            m.stop_reason = to_string(rep.run.stop);
            write_run_outputs(dir, rep.run, rep.series, false, m.output_paths);
            write_file(dir / "final_snapshot.csv",
                       render([&](std::ostream& os) { write_snapshot(os, rep.run.snapshots.back()); }), m.output_paths);
            write_file(dir / "prediction.csv", render([&](std::ostream& os) { write_prediction(os, rep.prediction); }),
                       m.output_paths);
            write_file(dir / "envelope.csv", render([&](std::ostream& os) { write_envelope(os, rep.envelope); }),
                       m.output_paths);
            if (rep.ode) {
                write_file(dir / "ode.csv", render([&](std::ostream& os) { write_envelope(os, *rep.ode); }),
                           m.output_paths);
            }
            checks = rep.checks;
            pass = rep.pass();
        } else {
            SuiteConfig cfg;
            cfg.seed = seed;
            cfg.jobs = std::max(1, opt.jobs);
            if (target != "inequalities") {
                cfg.ids = {parse_inequality(target)};
            }
            const auto rows = run_suite(cfg);
            write_file(dir / "verify.csv", render([&](std::ostream& os) { write_csv(os, rows); }), m.output_paths);
            for (InequalityId iid : cfg.ids) {
                long n = 0;
                long ok = 0;
                for (const auto& r : rows) {
                    if (r.id == iid) {
                        ++n;
                        ok += r.pass ? 1 : 0;
                    }
                }
                checks.push_back({to_string(iid), n > 0 && ok == n, std::to_string(ok) + "/" + std::to_string(n)});
                pass = pass && n > 0 && ok == n;
            }
        }
        write_file(dir / "summary.csv", render([&](std::ostream& os) { write_checks(os, checks); }), m.output_paths);
        m.overall_pass = pass;
        finish(dir, m);
        for (const Check& c : checks) {
            log << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
        }
        log << "reproduce " << target << ": " << (pass ? "pass" : "FAIL") << '\n';
        return pass ? Ok : Failed;
    });
}

// ---- scenarios -----------------------------------------------------------

BlowupScenario blowup_scenario(Criterion c) {
    BlowupScenario s;
    s.criterion = c;
    s.config.max_time = 2.0;
    switch (c) {
    case Criterion::Monotone:
        s.name = "monotone-blowup";
        s.config.sign = -1;
        s.config.initial = make_gaussian(1.0, 0.3);
        s.parameter = 0.75;
        s.record_interval = 0.005;
        break;
    case Criterion::NonMonotone: {
        s.name = "exponential-blowup";
        s.config.sign = 1;
        s.config.params = {1.0, 1.0};
        const double w = gaussian_dip_width(1.1 * ConstantCatalog::threshold_Jtilde(1.0));
        s.config.initial = make_gaussian(-1.0, w);
        s.record_interval = 0.005;
        break;
    }
    case Criterion::Telescoping:
        s.name = "telescoping-blowup";
        s.config.sign = -1;
        s.config.initial = make_gaussian(1.0, 1.0);
        s.parameter = 0.5;
        s.record_interval = 0.05;
        break;
    }
    return s;
}

BlowupScenario dissipative_scenario() {
    BlowupScenario s;
    s.name = "dissipative";
    s.criterion = Criterion::NonMonotone;
    s.config.sign = 1;
    s.config.gamma = 0.25;
    s.config.max_time = 1.0;
    s.config.initial = make_gaussian(-1.0, 1.0);
    s.record_interval = 0.05;
    return s;
}

bool ScenarioReport::pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ScenarioReport evaluate_scenario(const BlowupScenario& s) {
    ScenarioReport rep;
    rep.scenario = s;
    rep.run = run(s.config, s.record_interval);
    const double sigma = s.criterion == Criterion::Monotone ? s.parameter : 0.5;
    const double alpha = s.criterion == Criterion::Telescoping ? s.parameter : 0.5;
    rep.series = evaluate_series(rep.run.snapshots, sigma, alpha);
    rep.prediction = predict_blowup(rep.run.snapshots.front().rho, s.config, s.criterion, s.parameter);
    rep.envelope = envelope_compare(rep.series, rep.prediction);
    if (s.name == "dissipative") {
        dissipative_checks(rep);
        return rep;
    }
    switch (s.criterion) {
    case Criterion::Monotone:
        rep.ode = ode_consistency(rep.series, rep.prediction);
        monotone_checks(rep);
        break;
    case Criterion::NonMonotone:
        exponential_checks(rep);
        break;
    case Criterion::Telescoping:
        telescoping_checks(rep);
        break;
    }
    return rep;
}

void write_checks(std::ostream& os, const std::vector<Check>& checks) {
    os << "name,pass,detail\n";
    for (const Check& c : checks) {
        std::string d = c.detail;
        std::replace(d.begin(), d.end(), ',', ';');
        os << c.name << ',' << (c.pass ? "true" : "false") << ',' << d << '\n';
    }
}

void write_envelope(std::ostream& os, const EnvelopeReport& r) {
    os << "key,value\n";
    os << "checked," << (r.checked ? "true" : "false") << '\n';
    os << "points," << r.points << '\n';
    os << "violations," << r.violations << '\n';
    os << "first_violation," << fmt17(r.first_violation) << '\n';
    os << "band," << fmt17(r.band) << '\n';
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    os << "note," << note << '\n';
}

const std::vector<ReproduceTarget>& reproduce_targets() {
    static const std::vector<ReproduceTarget> targets = [] {
        std::vector<ReproduceTarget> t{
            {"monotone-blowup", {"thm-3.5"}, "J functional run, sign -1, ODE consistency"},
            {"exponential-blowup", {"thm-3.7"}, "Jtilde functional run, sign +1, explicit t*"},
            {"telescoping-blowup", {"thm-4.4"}, "F functional run, sign -1, dyadic constant"},
            {"dissipative", {"remark-3.8"}, "sign +1 with fractional dissipation, gamma 0.25"},
            {"inequalities", {"all"}, "every inequality suite"},
        };
        for (const InequalityAlias& a : inequality_aliases()) {
            t.push_back({to_string(a.id), {a.alias}, "inequality suite"});
        }
        return t;
    }();
    return targets;
}

} // namespace ipm1d::cli
