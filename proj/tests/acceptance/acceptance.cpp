// Acceptance run: one PASS/FAIL line per criterion. Arguments select
// criteria by number; no arguments runs all of them.

#include "ipm1d/cli.hpp"
#include "ipm1d/diagnostics.hpp"
#include "ipm1d/format.hpp"
#include "ipm1d/inequalities.hpp"
#include "ipm1d/solver.hpp"
#include "ipm1d/transform.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace ipm1d;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// 12 even profiles: random mixtures, sech and plateau shapes
std::vector<TestFunction> regression_family() {
    std::vector<TestFunction> out;
    const Family fams[] = {Family::GaussianMixture, Family::GaussianBump, Family::SechProfile, Family::Plateau};
    for (int i = 0; i < 12; ++i) {
        FunctionFamilySpec spec;
        spec.family = fams[i % 4];
        spec.seed = 7001 + i;
        spec.off_center = spec.family == Family::GaussianMixture && i % 8 == 0;
        out.push_back(make_random_even(spec));
    }
    return out;
}

Outcome transform_cross_validation() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto fs = regression_family();
    const std::vector<double> probes{0.05, 0.2, 0.5, 1.0, 1.5, 2.5, 4.0, 7.0};
    double worst = 0.0;
    int n = 0;
    bool converged = true;
    for (const TestFunction& f : fs) {
        for (double a : {0.5, 1.0, 2.0}) {
            for (double x : probes) {
                std::vector<double> v;
                for (Route r : {Route::PV, Route::Even, Route::LogKernel, Route::Split}) {
                    const auto res = ha(r, f, {a, 1.0}, x);
                    converged = converged && res.converged;
                    v.push_back(res.value);
                }
                for (double p : v) {
                    for (double q : v) {
                        worst = std::max(worst, std::abs(p - q) / (1.0 + std::abs(p)));
                    }
                }
                ++n;
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst <= 1e-6 && secs < 120.0, std::to_string(n) + " probes, max pairwise " + sci(worst) +
                                               (converged ? "" : ", some route not converged") + ", " +
                                               sci(secs) + " s"};
}

Outcome multiplier_certification() {
    double worst = 0.0;
    int n = 0;
    for (double w : {0.5, 1.0, 2.0}) {
        const TestFunction f = make_gaussian(1.0, w);
        const GridFunction u = GridFunction::sample(f.eval, 40.0, 4096);
        for (double a : {0.5, 1.0, 2.0}) {
            const GridTransform h = ha_grid(u, {a, 1.0});
            for (int k = 1; k <= 16; ++k) {
                const int j = u.origin() + 25 * k;
                const double ref = ha_pv(f, {a, 1.0}, u.x(j)).value;
                worst = std::max(worst, rel(h.values[j], ref));
                ++n;
            }
        }
    }
    bool limits = true;
    for (double a : {0.5, 1.0, 2.0}) {
        limits = limits && multiplier(0.0, a) == std::complex<double>(0.0, 0.0);
        limits = limits && std::abs(std::abs(multiplier(1e4, a)) - 1.0) <= 1e-15;
        limits = limits && std::abs(std::abs(multiplier(10.0 / a, a)) - (1.0 - std::exp(-20.0 * kPi))) <= 1e-15;
    }
    return {worst <= 1e-6 && limits, std::to_string(n) + " probes, max relative " + sci(worst) +
                                         (limits ? ", m(0)=0 and |m|->1" : ", multiplier limits wrong")};
}

Outcome inequality_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteConfig cfg;
    cfg.jobs = jobs();
    const auto rows = run_suite(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<int> count(all_inequalities().size(), 0);
    std::vector<int> ok(all_inequalities().size(), 0);
    for (const auto& r : rows) {
        const auto i = static_cast<std::size_t>(r.id);
        ++count[i];
        ok[i] += r.pass ? 1 : 0;
    }
    bool all = true;
    std::string failed;
    for (std::size_t i = 0; i < count.size(); ++i) {
        if (count[i] < 100 || ok[i] != count[i]) {
            all = false;
            failed += " " + to_string(all_inequalities()[i]) + "(" + std::to_string(ok[i]) + "/" +
                      std::to_string(count[i]) + ")";
        }
    }
    // the catalog against the stated formulas
    bool constants = true;
    for (double a : {0.5, 1.0, 2.0}) {
        for (double s : {-0.5, 0.0, 0.5}) {
            const double base = 3.0 + s - 2.0 * std::sqrt(2.0 + s);
            constants = constants && rel(ConstantCatalog::C_a_sigma(a, s), a * a / kPi * base) <= 1e-15;
            constants = constants &&
                        rel(ConstantCatalog::C_a_sigma_L(a, s, 2.0), a * a * base / (kPi * (a * a + 4.0))) <= 1e-15;
            constants = constants && rel(ConstantCatalog::C_a_sigma_p(a, s, 2.0),
                                         (1.0 + s) * a * a / (3.0 * kPi) *
                                             std::pow(1.0 - std::sqrt(2.0 / (3.0 + s)), 2.0)) <= 1e-14;
        }
        constants = constants && rel(ConstantCatalog::exp_defect(a), 2.0 / kPi * (4719.0 + 3.0 / (a * a))) <= 1e-15;
        constants = constants && rel(ConstantCatalog::omega(a, 0.7) * a * a / kPi,
                                     a * a / kPi * (3.0 * 0.49 + a * a) / std::pow(0.49 + a * a, 2)) <= 1e-15;
    }
    const double c = 0.1;
    const double q = 1.5;
    const double lead = std::pow(0.9, 3.0) * std::pow(q, 1.0);
    constants = constants && rel(ConstantCatalog::C_prime_p_sigma(2.0, 1.0, q, c),
                                 c * c * (lead - 1.0) / (2.0 * (q - 1.0) * std::pow(q, 3.0) * (2.0 * lead - 1.0))) <=
                                 1e-15;
    return {all && constants && secs < 900.0,
            std::to_string(rows.size()) + " rows" + (all ? " all pass" : ", failing:" + failed) +
                (constants ? ", constants as stated" : ", constant mismatch") +
                ", " + sci(secs) + " s"};
}

Outcome identities() {
    Uniform rng(424242);
    double worst_global = 0.0;
    double worst_deriv = 0.0;
    bool signs = true;
    for (int i = 0; i < 100; ++i) {
        const double a = rng.in(0.3, 3.0);
        const double x = rng.in(0.05, 5.0);
        double y = rng.in(0.05, 5.0);
        if (std::abs(x - y) < 0.05) {
            y += 0.1;
        }
        signs = signs && even_kernel_dy(x, y, a) > 0.0 && even_kernel_dx(x, y, a) < 0.0;
        const double hy = 1e-5 * y;
        const double hx = 1e-5 * x;
        const double fdy = (even_kernel(x, y + hy, a) - even_kernel(x, y - hy, a)) / (2.0 * hy);
        const double fdx = (even_kernel(x + hx, y, a) - even_kernel(x - hx, y, a)) / (2.0 * hx);
        const double z = rng.in(0.05, 5.0) * (rng.next() < 0.5 ? -1.0 : 1.0);
        const double hz = 1e-5 * std::abs(z);
        const double fdz = (log_kernel(z + hz, a) - log_kernel(z - hz, a)) / (2.0 * hz);
        worst_deriv = std::max({worst_deriv, rel(even_kernel_dy(x, y, a), fdy), rel(even_kernel_dx(x, y, a), fdx),
                                rel(log_kernel_dx(z, a), fdz)});

        FunctionFamilySpec spec;
        spec.seed = 9100 + i;
        spec.family = i % 2 == 0 ? Family::GaussianMixture : Family::SechProfile;
        spec.off_center = i % 4 == 0;
        const InequalityReport r = check_global_identity(make_random_even(spec), a);
        worst_global = std::max(worst_global, std::abs(r.lhs - r.rhs) / (1.0 + std::abs(r.lhs)));
    }
    const bool ok = signs && worst_deriv <= 1e-6 && worst_global <= 1e-6;
    return {ok, "100 triples: global identity max " + sci(worst_global) + ", derivative formulas max " +
                    sci(worst_deriv) + (signs ? ", signs hold" : ", sign violated")};
}

struct Invariants {
    double sup_drift = 0.0;
    double even = 0.0;
    double mono = -1.0;
    double mean_drop = 0.0;
    double end_time = 0.0;
    std::string stop;
};

Invariants invariants(const RunResult& r) {
    Invariants v;
    const double s0 = r.snapshots.front().rho.sup_norm();
    for (const SimState& s : r.snapshots) {
        v.sup_drift = std::max(v.sup_drift, std::abs(s.rho.sup_norm() - s0) / s0);
        v.even = std::max(v.even, s.rho.even_defect() / s0);
        const int o = s.rho.origin();
        for (int j = o; j < o + s.rho.size() / 4; ++j) {
            v.mono = std::max(v.mono, s.rho[j + 1] - s.rho[j]);
        }
    }
    for (std::size_t i = 1; i < r.steps.size(); ++i) {
        v.mean_drop = std::max(v.mean_drop, r.steps[i - 1].mass - r.steps[i].mass);
    }
    v.end_time = r.snapshots.back().time;
    v.stop = to_string(r.stop);
    return v;
}

Outcome solver_invariants() {
    struct Case {
        std::string name;
        SimConfig cfg;
    };
    std::vector<Case> cases(3);
    cases[0].name = "gaussian-minus";
    cases[0].cfg.initial = make_gaussian(1.0, 1.0);
    cases[1].name = "sech-minus";
    cases[1].cfg.initial = make_sech(1.0, 1.5);
    cases[2].name = "dip-plus";
    cases[2].cfg.sign = 1;
    cases[2].cfg.initial = make_gaussian(-1.0, 1.0);
    bool ok = true;
    std::string detail;
    for (Case& c : cases) {
        c.cfg.max_time = 0.5;
        const Invariants v = invariants(run(c.cfg, 0.05));
        bool good = v.sup_drift <= 1e-5 && v.even <= 1e-8;
        if (c.cfg.sign == -1) {
            good = good && v.mono <= 1e-6;
        } else {
            good = good && v.mean_drop <= 1e-8;
        }
        ok = ok && good;
        detail += c.name + "[t=" + fmt17(v.end_time) + " " + v.stop + " sup " + sci(v.sup_drift) + " even " +
                  sci(v.even) + (c.cfg.sign == -1 ? " mono " + sci(v.mono) : " mean-drop " + sci(v.mean_drop)) +
                  "] ";
    }
    // halving the spacing at a resolved time
    SimConfig fine;
    fine.initial = make_gaussian(1.0, 1.0);
    fine.max_time = 0.5;
    SimConfig coarse = fine;
    coarse.resolution = 2048;
    const RunResult rf = run(fine, 0.5);
    const RunResult rc = run(coarse, 0.5);
    double diff = std::numeric_limits<double>::infinity();
    const SimState& f = rf.snapshots.back();
    const SimState& c = rc.snapshots.back();
    if (std::abs(f.time - c.time) < 1e-12) {
        diff = 0.0;
        for (int j = 0; j < c.rho.size(); ++j) {
            diff = std::max(diff, std::abs(c.rho[j] - f.rho[2 * j]));
        }
    }
    ok = ok && diff <= 1e-5;
    detail += "resolution 2048 vs 4096 at t=" + fmt17(f.time) + ": " + sci(diff);
    return {ok, detail};
}

std::string summarize(const std::vector<cli::Check>& checks) {
    std::string s;
    for (const auto& c : checks) {
        if (!c.pass) {
            s += (s.empty() ? "" : "; ") + std::string("failed ") + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
        }
    }
    return s;
}

Outcome exponential_blowup() {
    const cli::ScenarioReport rep = cli::evaluate_scenario(cli::blowup_scenario(Criterion::NonMonotone));
    if (rep.pass()) {
        return {true, "stop " + to_string(rep.run.stop) + " at t=" + fmt17(rep.run.snapshots.back().time)};
    }
    return {false, summarize(rep.checks)};
}

Outcome ode_consistency_run() {
    const cli::ScenarioReport rep = cli::evaluate_scenario(cli::blowup_scenario(Criterion::Monotone));
    const EnvelopeReport& o = *rep.ode;
    std::string d = "sigma=" + fmt17(rep.scenario.parameter) + " J(0)=" + fmt17(rep.prediction.initial) +
                    " threshold=" + fmt17(rep.prediction.threshold) + ", " + std::to_string(o.points) +
                    " interior records, " + std::to_string(o.violations) + " violations, stop " +
                    to_string(rep.run.stop) + " at t=" + fmt17(rep.run.snapshots.back().time);
    if (!rep.pass()) {
        d += "; " + summarize(rep.checks);
    }
    return {rep.pass(), d};
}

Outcome telescoping() {
    const cli::ScenarioReport rep = cli::evaluate_scenario(cli::blowup_scenario(Criterion::Telescoping));
    const DyadicSum d = dyadic_series_constant(1.0, 0.5, 60);
    std::string s = "c=" + fmt17(d.value) + " tail " + sci(d.tail_bound) + ", F " +
                    fmt17(rep.series.records.front().F) + " -> " + fmt17(rep.series.records.back().F) + " over " +
                    std::to_string(rep.series.records.size()) + " snapshots, stop " + to_string(rep.run.stop) +
                    " at t=" + fmt17(rep.run.snapshots.back().time);
    if (!rep.pass()) {
        s += "; " + summarize(rep.checks);
    }
    return {rep.pass() && d.tail_bound <= 1e-10, s};
}

Outcome dissipative() {
    SimConfig c;
    c.params.g = 0.0;
    c.gamma = 0.25;
    c.max_time = 1.0;
    c.initial = make_gaussian(1.0, 1.0);
    const RunResult r = run(c, 1.0);
    const Spectrum s0 = r.snapshots.front().rho.spectrum();
    const Spectrum s1 = r.snapshots.back().rho.spectrum();
    const double t = r.snapshots.back().time;
    double worst = 0.0;
    for (std::size_t k = 0; k < s0.size(); ++k) {
        const double xi = k / (2.0 * c.half_width);
        const double e = std::exp(-std::pow(2.0 * kPi * xi, 0.25) * t);
        worst = std::max(worst, std::abs(s1[k] - e * s0[k]) / std::abs(s0[0]));
    }
    const cli::ScenarioReport rep = cli::evaluate_scenario(cli::dissipative_scenario());
    std::string d = "g=0 per-mode defect " + sci(worst) + "; g=1 run stop " + to_string(rep.run.stop) + " at t=" +
                    fmt17(rep.run.snapshots.back().time);
    if (!rep.pass()) {
        d += "; " + summarize(rep.checks);
    }
    return {worst <= 1e-10 && rep.pass(), d};
}

struct Criterion9 {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion9> all{
        {1, "transform cross-validation", transform_cross_validation},
        {2, "multiplier certification", multiplier_certification},
        {3, "inequality suite", inequality_suite},
        {4, "identity checks", identities},
        {5, "solver invariants", solver_invariants},
        {6, "exponential-weight blow-up scenario", exponential_blowup},
        {7, "functional ODE consistency", ode_consistency_run},
        {8, "telescoping machinery", telescoping},
        {9, "dissipative mode", dissipative},
    };
    std::vector<int> pick;
    for (int i = 1; i < argc; ++i) {
        pick.push_back(std::atoi(argv[i]));
    }
    int failed = 0;
    for (const auto& c : all) {
        if (!pick.empty() && std::find(pick.begin(), pick.end(), c.id) == pick.end()) {
            continue;
        }
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
                  << std::endl;
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
