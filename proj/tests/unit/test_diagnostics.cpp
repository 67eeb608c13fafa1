#include "doctest.h"

#include "ipm1d/diagnostics.hpp"
#include "ipm1d/inequalities.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace ipm1d;

namespace {

GridFunction grid_of(const TestFunction& f) { return GridFunction::sample(f.eval, 40.0, 4096); }

} // namespace

TEST_CASE("functionals of constants vanish") {
    const GridFunction z(40.0, 4096);
    CHECK(compute_J(z, 0.5) == 0.0);
    CHECK(compute_Jtilde(z) == 0.0);
    CHECK(compute_F(z, 0.5) == 0.0);
    const TestFunction c = make_constant(2.0);
    CHECK(compute_J(c, 0.5) == 0.0);
    CHECK(compute_Jtilde(c) == 0.0);
    CHECK(compute_F(c, 0.5) == 0.0);
    CHECK_THROWS_AS(compute_J(z, 1.0), ParameterError);
    CHECK_THROWS_AS(compute_F(z, 0.0), ParameterError);
}

TEST_CASE("grid functionals match profile quadrature") {
    const std::vector<TestFunction> fs{make_gaussian(1.0, 1.0), make_gaussian(-2.0, 0.5), make_sech(1.5, 0.8),
                                       make_gaussian_mixture({{1.0, 0.7, 0.0}, {0.5, 0.5, 1.5}})};
    for (const TestFunction& f : fs) {
        const GridFunction g = grid_of(f);
        for (double s : {0.25, 0.5, 0.75}) {
            const double ref = compute_J(f, s);
            INFO(f.id, " sigma=", s);
            CHECK(std::abs(compute_J(g, s) - ref) <= 1e-5 * std::abs(ref));
            const double fr = compute_F(f, s);
            CHECK(std::abs(compute_F(g, s) - fr) <= 1e-5 * std::abs(fr));
        }
        const double jt = compute_Jtilde(f);
        INFO(f.id);
        CHECK(std::abs(compute_Jtilde(g) - jt) <= 1e-5 * std::abs(jt));
    }
    // closed form J of a Gaussian: w^-sigma Gamma(1 - sigma/2) / sigma
    CHECK(compute_J(make_gaussian(1.0, 0.5), 0.5) ==
          doctest::Approx(std::pow(0.5, -0.5) * std::tgamma(0.75) / 0.5).epsilon(1e-10));
}

TEST_CASE("functionals are linear") {
    const GridFunction g = grid_of(make_sech(1.0, 1.0));
    for (double lam : {-3.0, 0.5, 7.0}) {
        const GridFunction s = lam * g;
        CHECK(compute_J(s, 0.5) == doctest::Approx(lam * compute_J(g, 0.5)).epsilon(1e-12));
        CHECK(compute_Jtilde(s) == doctest::Approx(lam * compute_Jtilde(g)).epsilon(1e-12));
        CHECK(compute_F(s, 0.3) == doctest::Approx(lam * compute_F(g, 0.3)).epsilon(1e-12));
    }
}

TEST_CASE("Jtilde of increasing data is positive") {
    const TestFunction f = make_increasing_saturating(5.0, 1.0);
    const double v = compute_Jtilde(f);
    CHECK(v > 0.0);
    const GridFunction g = GridFunction::sample([](double x) { return 5.0 * (1.0 - std::exp(-x * x)) * std::exp(-x * x / 100.0); },
                                                40.0, 4096);
    CHECK(compute_Jtilde(g) > 0.0);
}

TEST_CASE("Gaussian dip oracle") {
    for (double w : {0.05, 0.3, 1.0, 3.0}) {
        INFO("w=", w);
        CHECK(gaussian_dip_Jtilde(w) == doctest::Approx(compute_Jtilde(make_gaussian(-1.0, w))).epsilon(1e-10));
    }
    // log(1/w) growth
    const double w = 1e-40;
    CHECK(std::abs(gaussian_dip_Jtilde(w) - gaussian_dip_Jtilde(10.0 * w) - std::log(10.0)) < 1e-10);
    CHECK(gaussian_dip_Jtilde(gaussian_dip_width(3.0)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(gaussian_dip_Jtilde(0.0), ParameterError);
}

TEST_CASE("remainder bracket for 1/log(1+e)") {
    for (long double e = 1e-3L; e < 8.0L; e *= 1.05L) {
        const long double v = 1.0L / std::log1p(e);
        INFO("e=", static_cast<double>(e));
        CHECK(v <= 1.0L / e + 0.5L);
        CHECK(v >= 1.0L / e + 0.5L - e / 12.0L);
    }
}

TEST_CASE("dyadic series constant") {
    const DyadicSum d = dyadic_series_constant(1.0, 0.5, 60);
    CHECK(d.tail_bound <= 1e-10);
    CHECK(d.ratio < 1.0);
    CHECK(d.terms == 60);
    CHECK(d.value >= d.partial);
    CHECK(d.value - d.partial <= d.omitted_upper + 1e-13);
    // direct summation with many more terms lands inside the bracket
    const DyadicSum far = dyadic_series_constant(1.0, 0.5, 400);
    CHECK(std::abs(far.value - d.value) <= 1e-12 * d.value);
    CHECK(far.partial > d.partial);

    for (double a : {0.3, 1.0, 4.0}) {
        for (double alpha : {0.1, 0.5, 0.9}) {
            double prev = 0.0;
            for (int n : {1, 2, 5, 10, 20}) {
                const DyadicSum s = dyadic_series_constant(a, alpha, n);
                INFO("a=", a, " alpha=", alpha, " n=", n);
                CHECK(s.partial > prev);
                CHECK(s.ratio < 1.0);
                prev = s.partial;
            }
            const double c = dyadic_series_constant(a, alpha, 60).value;
            CHECK(1.0 / (4.0 * std::numbers::pi * c) > 0.0);
        }
    }
    CHECK_THROWS_AS(dyadic_series_constant(0.0, 0.5, 10), ParameterError);
    CHECK_THROWS_AS(dyadic_series_constant(1.0, 1.0, 10), ParameterError);
    CHECK_THROWS_AS(dyadic_series_constant(1.0, 0.5, 0), ParameterError);
}

TEST_CASE("the dyadic constant bounds the original series") {
    // sum_k phi(2^k)^2 / (eta(2^(k+1)) log(3 sqrt((4^k + a^2)/(9 4^k + a^2)))), k < 0 and k >= 0
    const double alpha = 0.5;
    for (double a : {0.5, 1.0, 2.0}) {
        double direct = 0.0;
        for (int k = -60; k <= 60; ++k) {
            const double x = std::ldexp(1.0, k);
            const double eta = 2.0 * x < 1.0 ? std::pow(2.0 * x, -alpha) : std::pow(2.0 * x, -4.0 - alpha);
            const double phi = telescoping_phi(x, alpha);
            // log(3 sqrt((x^2 + a^2)/(9x^2 + a^2))) without cancellation
            const double l = 0.5 * std::log1p(8.0 * a * a / (9.0 * x * x + a * a));
            direct += phi * phi / (eta * l);
        }
        INFO("a=", a);
        CHECK(direct <= dyadic_series_constant(a, alpha, 60).value);
    }
}

TEST_CASE("predictions") {
    SimConfig minus;
    SimConfig plus;
    plus.sign = 1;
    const GridFunction z(40.0, 4096);
    CHECK_FALSE(predict_blowup(z, minus, Criterion::Monotone, 0.5).hypothesis_met);
    CHECK_FALSE(predict_blowup(z, plus, Criterion::NonMonotone).hypothesis_met);
    CHECK_FALSE(predict_blowup(z, minus, Criterion::Telescoping, 0.5).hypothesis_met);
    CHECK_FALSE(predict_blowup(z, minus, Criterion::Telescoping, 0.5).predicted_time);

    CHECK_THROWS_AS(predict_blowup(z, plus, Criterion::Monotone, 0.5), ConfigError);
    CHECK_THROWS_AS(predict_blowup(z, minus, Criterion::NonMonotone), ConfigError);
    CHECK_THROWS_AS(predict_blowup(z, plus, Criterion::Telescoping, 0.5), ConfigError);

    // any non-constant data meets the telescoping hypothesis
    const GridFunction g = grid_of(make_gaussian(1.0, 1.0));
    const BlowupPrediction t = predict_blowup(g, minus, Criterion::Telescoping, 0.5);
    CHECK(t.hypothesis_met);
    REQUIRE(t.predicted_time);
    const double c = dyadic_series_constant(1.0, 0.5, 60).value;
    CHECK(*t.predicted_time == doctest::Approx(4.0 * std::numbers::pi * c / t.initial));
    CHECK(t.initial <= ConstantCatalog::bound_F(0.5, 1.0));

    // J(0) > 2 sqrt2/sigma: Gaussian width 0.3 at sigma = 0.75
    const BlowupPrediction m = predict_blowup(grid_of(make_gaussian(1.0, 0.3)), minus, Criterion::Monotone, 0.75);
    CHECK(m.hypothesis_met);
    CHECK(m.threshold == doctest::Approx(2.0 * std::numbers::sqrt2 / 0.75));
    CHECK(std::sqrt(m.c2 / m.c1) == doctest::Approx(m.threshold));
    CHECK(m.predicted_time);
    CHECK_FALSE(predict_blowup(g, minus, Criterion::Monotone, 0.75).hypothesis_met);

    const BlowupPrediction n = predict_blowup(grid_of(make_gaussian(-1.0, 1.0)), plus, Criterion::NonMonotone);
    CHECK_FALSE(n.hypothesis_met);
    CHECK(n.threshold == doctest::Approx(std::sqrt(4722.0 * 3.0)));
    CHECK(n.c1 == doctest::Approx(2.0 / (3.0 * std::numbers::pi)));
    CHECK(n.c2 == doctest::Approx(2.0 / std::numbers::pi * 4722.0));

    CHECK(parse_criterion("exponential") == Criterion::NonMonotone);
    CHECK(parse_criterion(to_string(Criterion::Telescoping)) == Criterion::Telescoping);
    CHECK_THROWS_AS(parse_criterion("quartic"), ParameterError);
}

TEST_CASE("Riccati comparison") {
    const double c1 = 2.0 / (3.0 * std::numbers::pi);
    const double c2 = 2.0 / std::numbers::pi * 4722.0;
    const double y0 = 1.1 * std::sqrt(c2 / c1);
    const auto t = riccati_escape_time(c1, c2, y0);
    REQUIRE(t);
    CHECK(*t == doctest::Approx(std::log(2.1 / 0.1) / (2.0 * std::sqrt(c1 * c2))));
    CHECK(std::isinf(riccati_solution(c1, c2, y0, *t * 1.0001)));
    CHECK(riccati_solution(c1, c2, y0, *t * 0.9) > 5.0 * y0);
    CHECK_FALSE(riccati_escape_time(c1, c2, 0.9 * std::sqrt(c2 / c1)));
    CHECK(riccati_escape_time(2.0, 0.0, 4.0) == doctest::Approx(0.125));
    // solution satisfies the ODE
    const double h = 1e-6;
    const double s = 0.5 * *t;
    const double d = (riccati_solution(c1, c2, y0, s + h) - riccati_solution(c1, c2, y0, s - h)) / (2.0 * h);
    const double y = riccati_solution(c1, c2, y0, s);
    CHECK(d == doctest::Approx(c1 * y * y - c2).epsilon(1e-6));
}

TEST_CASE("series, envelope and sidecar") {
    SimConfig c;
    c.initial = make_gaussian(1.0, 0.3);
    c.max_time = 0.1;
    const RunResult r = run(c, 0.01);
    const DiagnosticSeries s = evaluate_series(r.snapshots, 0.75, 0.5);
    REQUIRE(s.records.size() == r.snapshots.size());
    for (std::size_t i = 1; i < s.records.size(); ++i) {
        CHECK(s.records[i].bkm >= s.records[i - 1].bkm);
        CHECK(s.records[i].F >= s.records[i - 1].F);
    }
    const BlowupPrediction p = predict_blowup(r.snapshots.front().rho, c, Criterion::Monotone, 0.75);
    const EnvelopeReport ode = ode_consistency(s, p);
    CHECK(ode.checked);
    CHECK(ode.violations == 0);
    const EnvelopeReport env = envelope_compare(s, p);
    CHECK(env.checked);
    CHECK(env.violations == 0);

    const BlowupPrediction off = predict_blowup(grid_of(make_gaussian(1.0, 1.0)), c, Criterion::Monotone, 0.75);
    CHECK_FALSE(envelope_compare(s, off).checked);
    CHECK(envelope_compare(DiagnosticSeries{}, p).points == 0);

    std::ostringstream os;
    write_series(os, s);
    CHECK(os.str().rfind("t,J,Jtilde,F,bkm,sup_norm,max_gradient\n", 0) == 0);
    std::ostringstream ps;
    write_prediction(ps, p);
    CHECK(ps.str().find("criterion,monotone\n") != std::string::npos);
    CHECK(ps.str().find("hypothesis-met,true\n") != std::string::npos);
}

TEST_CASE("zero run has zero diagnostics") {
    SimConfig c;
    c.max_time = 0.1;
    const RunResult r = run(c, 0.05);
    const DiagnosticSeries s = evaluate_series(r.snapshots, 0.5, 0.5);
    CHECK(s.stop_reason == "max-time");
    for (const FunctionalRecord& q : s.records) {
        CHECK(q.J == 0.0);
        CHECK(q.Jtilde == 0.0);
        CHECK(q.F == 0.0);
        CHECK(q.bkm == 0.0);
    }
}
