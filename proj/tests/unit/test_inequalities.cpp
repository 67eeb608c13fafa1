#include "doctest.h"

#include "ipm1d/inequalities.hpp"
#include "ipm1d/transform.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace ipm1d;

namespace {

constexpr double kPi = std::numbers::pi;

TestFunction dilate(const TestFunction& f, double mu) {
    TestFunction g = f;
    g.id = f.id + "-dilated";
    g.eval = [f, mu](double x) { return f(x / mu); };
    g.deriv = [f, mu](double x) { return f.derivative(x / mu) / mu; };
    g.decay_rate = f.decay_rate * mu;
    auto env = f.tail_envelope;
    g.tail_envelope = [env, mu](double r) { return env(r / mu); };
    return g;
}

} // namespace

TEST_CASE("catalog constants") {
    CHECK(ConstantCatalog::C_a_sigma(1.0, 0.0) == doctest::Approx((3.0 - 2.0 * std::sqrt(2.0)) / kPi));
    CHECK(ConstantCatalog::C_a_sigma(1.0, 0.0) == doctest::Approx(0.0546134).epsilon(1e-6));
    CHECK(ConstantCatalog::C_a_sigma_L(1.0, 0.0, 1e8) < 1e-16);
    CHECK(ConstantCatalog::C_a_sigma_L(2.0, 0.5, 0.0 + 1e-9) ==
          doctest::Approx(ConstantCatalog::C_a_sigma(2.0, 0.5) / 4.0));

    // p -> 1+ limit
    for (double sigma : {-0.5, 0.0, 0.5}) {
        const double limit = (1.0 + sigma) * (1.0 - 2.0 / (3.0 + sigma)) / (2.0 * kPi);
        CHECK(ConstantCatalog::C_a_sigma_p(1.0, sigma, 1.0 + 1e-9) ==
              doctest::Approx(limit).epsilon(1e-6));
    }
    CHECK(ConstantCatalog::exp_defect(1.0) == doctest::Approx(2.0 / kPi * 4722.0));
    CHECK(ConstantCatalog::threshold_Jtilde(1.0) == doctest::Approx(std::sqrt(4722.0 * 3.0)));
    CHECK(ConstantCatalog::bound_F(0.5, 1.0) == doctest::Approx(8.0 / (0.5 * 3.5)));

    CHECK_THROWS_AS(ConstantCatalog::C_a_sigma(1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(ConstantCatalog::C_a_sigma(0.0, 0.0), ParameterError);
    CHECK_THROWS_AS(ConstantCatalog::C_a_sigma_p(1.0, 0.0, 1.0), ParameterError);
    try {
        ConstantCatalog::C_prime_p_sigma(1.0, 1.0, 1.5, 0.9);
        FAIL("expected a feasibility error");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("(1-c)^(p+1) q^sigma > 1") != std::string::npos);
    }
}

TEST_CASE("catalog constants are positive on their domains") {
    for (double a : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        CHECK(ConstantCatalog::exp_defect(a) > 0.0);
        CHECK(ConstantCatalog::threshold_Jtilde(a) > 0.0);
        for (double sigma = -0.99; sigma < 0.995; sigma += 0.09) {
            CHECK(ConstantCatalog::C_a_sigma(a, sigma) > 0.0);
            for (double L : {0.1, 1.0, 10.0}) {
                CHECK(ConstantCatalog::C_a_sigma_L(a, sigma, L) > 0.0);
            }
            for (double p : {1.01, 1.5, 2.0, 5.0, 20.0}) {
                CHECK(ConstantCatalog::C_a_sigma_p(a, sigma, p) > 0.0);
            }
        }
    }
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
        for (double sigma : {0.1, 0.5, 1.0, 3.0}) {
            for (double q : {1.1, 1.5, 1.9}) {
                const double c = ConstantCatalog::default_c(p, sigma, q);
                CHECK(c > 0.0);
                CHECK(ConstantCatalog::C_prime_p_sigma(p, sigma, q, c) > 0.0);
            }
        }
    }
    for (double alpha : {0.01, 0.5, 0.99}) {
        CHECK(ConstantCatalog::bound_F(alpha, 1.0) > 0.0);
    }
}

TEST_CASE("omega weight maximum") {
    for (double a : {0.5, 1.0, 2.0}) {
        // golden-section search on (0, 10a)
        double lo = 0.0;
        double hi = 10.0 * a;
        const double r = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int i = 0; i < 200; ++i) {
            const double m1 = hi - r * (hi - lo);
            const double m2 = lo + r * (hi - lo);
            if (ConstantCatalog::omega(a, m1) < ConstantCatalog::omega(a, m2)) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        const double xmax = 0.5 * (lo + hi);
        CHECK(xmax == doctest::Approx(a / std::sqrt(3.0)).epsilon(1e-6));
        CHECK(ConstantCatalog::omega(a, xmax) <= ConstantCatalog::omega_max(a) * (1.0 + 1e-14));
        CHECK(ConstantCatalog::omega(a, xmax) == doctest::Approx(ConstantCatalog::omega_max(a)));
    }
}

TEST_CASE("pointwise lower bound") {
    const TestFunction g = make_gaussian(1.0, 1.0);
    for (double x : {0.1, 1.0, 3.0}) {
        const InequalityReport r = check_pointwise_lower(g, 1.0, x);
        CHECK(r.pass);
        CHECK(r.margin > 0.0);
    }
    CHECK(check_pointwise_lower(make_constant(2.0), 1.0, 1.0).pass);
    CHECK_THROWS_AS(check_pointwise_lower(make_increasing_saturating(1.0, 1.0), 1.0, 1.0),
                    HypothesisError);
    CHECK_THROWS_AS(check_pointwise_lower(g, 1.0, -1.0), ParameterError);
}

TEST_CASE("pointwise lower bound under dilation") {
    const TestFunction g = make_gaussian(1.0, 1.0);
    const double mu = 2.0;
    const TestFunction gm = dilate(g, mu);
    for (double x : {0.3, 1.0, 2.0}) {
        const InequalityReport r = check_pointwise_lower(g, 1.0, x);
        const InequalityReport s = check_pointwise_lower(gm, mu, mu * x);
        // the kernel and the averaged bound are both scale invariant
        CHECK(s.lhs == doctest::Approx(r.lhs).epsilon(1e-8));
        CHECK(s.rhs == doctest::Approx(r.rhs).epsilon(1e-8));
        CHECK(s.pass == r.pass);
    }
}

TEST_CASE("weighted monotone bound") {
    const TestFunction g = make_gaussian(1.0, 1.0);
    const InequalityReport r = check_ccf_weighted(g, 1.0, 0.0);
    CHECK(r.pass);
    CHECK(r.rhs > 0.0);
    CHECK(check_ccf_weighted(make_constant(1.0), 1.0, 0.0).pass);

    for (double lambda : {0.1, 10.0}) {
        const InequalityReport s = check_ccf_weighted(make_gaussian(lambda, 1.0), 1.0, 0.0);
        CHECK(s.lhs == doctest::Approx(lambda * lambda * r.lhs).epsilon(1e-7));
        CHECK(s.rhs == doctest::Approx(lambda * lambda * r.rhs).epsilon(1e-7));
        CHECK(s.pass == r.pass);
    }

    SuiteConfig cfg;
    cfg.ids = {InequalityId::WeightedMonotone};
    cfg.per_inequality = 18;
    for (const auto& row : run_suite(cfg)) {
        CHECK_MESSAGE(row.pass, row.function_id);
    }
}

TEST_CASE("corrupted constant is detected") {
    CheckOptions bad;
    bad.constant_scale = 100.0;
    const TestFunction g = make_gaussian(1.0, 1.0);
    CHECK_FALSE(check_ccf_weighted(g, 1.0, 0.0, bad).pass);
    CHECK_FALSE(check_pointwise_lower(g, 1.0, 1.0, bad).pass);
}

TEST_CASE("finite interval bound") {
    const TestFunction g = make_gaussian(1.0, 1.0);
    const InequalityReport r = check_ccf_finite_interval(g, 1.0, 0.0, 2.0);
    CHECK(r.pass);
    REQUIRE(r.L.has_value());
    CHECK(*r.L == 2.0);
    CHECK(check_ccf_finite_interval(make_constant(1.0), 1.0, 0.0, 2.0).pass);
}

TEST_CASE("power-p bound") {
    const TestFunction g = make_gaussian(1.0, 1.0);
    CHECK(check_kiselev_p_smooth(g, 1.0, 0.0, 2.0).pass);
    CHECK(check_kiselev_p_smooth(make_constant(1.0), 1.0, 0.0, 2.0).pass);
    CHECK_THROWS_AS(check_kiselev_p_smooth(g, 1.0, 0.0, 1.0), ParameterError);
}

TEST_CASE("sigma zero bound for non-monotone data") {
    const TestFunction pair = make_gaussian_mixture({{1.0, 0.5, 1.5}});
    CHECK_FALSE(pair.monotone_decreasing);
    const InequalityReport r = check_sigma0_identity_bound(pair, 1.0);
    CHECK(r.pass);
    CHECK(r.note.empty());
    CHECK(check_sigma0_identity_bound(make_constant(1.0), 1.0).pass);
}

TEST_CASE("exponential bound") {
    const InequalityReport z = check_exponential_weighted(make_constant(0.0), 1.0);
    CHECK(z.pass);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    const InequalityReport c = check_exponential_weighted(make_constant(2.0), 1.0);
    CHECK(c.pass);
    CHECK(c.rhs == doctest::Approx(-4.0 * ConstantCatalog::exp_defect(1.0)));

    SuiteConfig cfg;
    cfg.ids = {InequalityId::WeightedExponential};
    cfg.per_inequality = 9;
    for (const auto& row : run_suite(cfg)) {
        CHECK_MESSAGE(row.pass, row.function_id);
    }
}

TEST_CASE("local velocity and nonlinear bounds") {
    const TestFunction g = make_gaussian(1.0, 1.0);
    const InequalityReport v = check_local_velocity_bound(g, 1.0, 2.0, 1.0);
    CHECK(v.pass);
    CHECK(v.rhs >= 0.0);
    const InequalityReport n = check_local_nonlinear_upper(g, 1.0, 2.0, 1.0);
    CHECK(n.pass);
    CHECK(n.rhs <= 0.0);

    // x1 -> x2+: the f-difference beats the log
    const InequalityReport near = check_local_velocity_bound(g, 1.0, 1.0 + 1e-9, 1.0);
    CHECK(std::abs(near.rhs) < 1e-7);

    const InequalityReport c = check_local_velocity_bound(make_constant(3.0), 1.0, 2.0, 1.0);
    CHECK(c.pass);
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == 0.0);
    CHECK(check_local_nonlinear_upper(make_constant(3.0), 1.0, 2.0, 1.0).pass);
    CHECK_THROWS_AS(check_local_velocity_bound(g, 1.0, 1.0, 2.0), ParameterError);
    CHECK(local_log_factor(1.0, 2.0, 1.0) < 0.0);
}

TEST_CASE("global identity") {
    const InequalityReport g = check_global_identity(make_gaussian(1.0, 1.0), 1.0);
    CHECK(g.pass);
    CHECK(g.rhs <= 0.0);
    // Fourier oracle: -2 int_0^inf 2 pi xi (1 - e^(-2 pi xi)) pi e^(-2 pi^2 xi^2) dxi
    CHECK(g.lhs == doctest::Approx(-0.655679542418798).epsilon(1e-9));
    CHECK(g.rhs == doctest::Approx(-0.655679542418798).epsilon(1e-8));

    const InequalityReport s = check_global_identity(make_shifted_gaussian(1.0, 0.7, 1.3), 2.0);
    CHECK(s.pass);
    const InequalityReport c = check_global_identity(make_constant(1.0), 1.0);
    CHECK(c.pass);
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == 0.0);
}

TEST_CASE("upper bound for increasing data") {
    const TestFunction s = make_increasing_saturating(1.0, 1.0);
    const InequalityReport r = check_upper_bound_q(s, 1.0, 1.0, 1.5);
    CHECK(r.pass);
    for (double q : {1.0 + 1e-9, 2.0 - 1e-9}) {
        const InequalityReport e = check_upper_bound_q(s, 1.0, 1.0, q);
        CHECK(e.pass);
        CHECK(e.lhs <= 0.0);
    }
    CHECK(check_upper_bound_q(make_constant(0.0), 1.0, 1.0, 1.5).pass);
    CHECK_THROWS_AS(check_upper_bound_q(s, 1.0, 1.0, 2.0), ParameterError);
    CHECK_THROWS_AS(check_upper_bound_q(make_gaussian(1.0, 1.0), 1.0, 1.0, 1.5), HypothesisError);
}

TEST_CASE("general power bound for increasing data") {
    const TestFunction s = make_increasing_saturating(1.0, 1.0);
    const double c = ConstantCatalog::default_c(1.0, 1.0, 1.5);
    CHECK(check_kiselev_general(s, 1.0, 1.0, 1.0, 1.5, c).pass);
    CHECK(check_kiselev_general(make_constant(0.0), 1.0, 1.0, 1.0, 1.5, c).pass);
    CHECK_THROWS_AS(check_kiselev_general(s, 1.0, 1.0, 1.0, 1.5, 0.9), ParameterError);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        FunctionFamilySpec spec;
        spec.family = Family::IncreasingSaturating;
        spec.seed = seed;
        const TestFunction f = make_random_even(spec);
        const double c2 = ConstantCatalog::default_c(2.0, 0.5, 1.5);
        CHECK_MESSAGE(check_kiselev_general(f, 1.0, 0.5, 2.0, 1.5, c2).pass, f.id);
    }
}

TEST_CASE("suite runner") {
    SuiteConfig cfg;
    cfg.per_inequality = 3;
    cfg.jobs = 1;
    const auto one = run_suite(cfg);
    cfg.jobs = 4;
    const auto four = run_suite(cfg);
    REQUIRE(one.size() == 3 * all_inequalities().size());
    std::ostringstream a;
    std::ostringstream b;
    write_csv(a, one);
    write_csv(b, four);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("inequality-id,function-id,a,sigma,p,q,c,L,x,x1,x2,lhs,rhs,margin,quad-error,pass", 0) == 0);
    for (const auto& r : one) {
        CHECK_MESSAGE(r.pass, (ipm1d::to_string(r.id) + " " + r.function_id + " " + r.note));
    }

    cfg.constants_only = true;
    cfg.per_inequality = 5;
    for (const auto& r : run_suite(cfg)) {
        CHECK_MESSAGE(r.pass, (ipm1d::to_string(r.id) + " " + r.note));
    }

    for (InequalityId id : all_inequalities()) {
        CHECK(parse_inequality(to_string(id)) == id);
    }
    CHECK_THROWS_AS(parse_inequality("nope"), ParameterError);
}
