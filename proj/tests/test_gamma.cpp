#include <doctest.h>

#include <cmath>

#include "bnf/gammafn.hpp"
#include "bnf/util.hpp"

using namespace tnf;

TEST_CASE("log_gamma values") {
    CHECK(double(log_gamma(1.0)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(double(log_gamma(2.0)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(double(log_gamma(5.0)) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
    CHECK(double(log_gamma(0.5)) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
    // the minimum region near t0 ~ 1.46, Gamma(t0) ~ 0.8856
    CHECK(double(r_exp(log_gamma(1.46))) == doctest::Approx(0.8856).epsilon(2e-4));
    CHECK_THROWS_AS(log_gamma(0.0), error);
    CHECK_THROWS_AS(log_gamma(-2.5), error);
}

TEST_CASE("log_gamma against libm") {
    rng gen(5);
    for (int i = 0; i < 300; ++i) {
        double x = 0.05 * std::pow(4000.0, gen.next_double());
        double ours = double(log_gamma(real(x)));
        double ref = std::lgamma(x);
        INFO("x = ", x);
        CHECK(ours == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("gamma recursion") {
    rng gen(6);
    for (int i = 0; i < 100; ++i) {
        double x = 0.1 + 60.0 * gen.next_double();
        double lhs = double(log_gamma(real(x + 1)));
        double rhs = std::log(x) + double(log_gamma(real(x)));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("beta values and symmetry") {
    CHECK(double(beta_fn(1, 1)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(double(beta_fn(2, 3)) == doctest::Approx(1.0 / 12).epsilon(1e-13));
    rng gen(7);
    for (int i = 0; i < 50; ++i) {
        double x = 0.1 + 10 * gen.next_double();
        double y = 0.1 + 10 * gen.next_double();
        CHECK(double(beta_fn(real(x), real(y))) ==
              doctest::Approx(double(beta_fn(real(y), real(x)))).epsilon(1e-13));
        // decreasing in each argument
        CHECK(double(beta_fn(real(x + 0.5), real(y))) < double(beta_fn(real(x), real(y))));
        CHECK(double(beta_fn(real(x), real(y + 0.5))) < double(beta_fn(real(x), real(y))));
    }
}

TEST_CASE("gamma-beta identity report") {
    inequality_report rep = check_gamma_beta_identity(0);
    CHECK(rep.pass);
    CHECK(rep.worst_ratio <= 1.0 + 1e-10);
}

TEST_CASE("beta Cauchy inequality") {
    // equality at a = b, c = d
    double lhs = double(beta_fn(1, 1));
    double rhs = std::sqrt(double(beta_fn(1, 1)) * double(beta_fn(1, 1)));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    double l2 = double(beta_fn(2, 2));
    CHECK(l2 == doctest::Approx(std::sqrt(double(beta_fn(2, 2)) * double(beta_fn(2, 2)))));
    CHECK(check_beta_cauchy().pass);
}

TEST_CASE("beta lower bound 4^{-x-y}") {
    CHECK(double(beta_fn(1, 1)) >= std::pow(4.0, -2));
    CHECK(double(beta_fn(5, 5)) == doctest::Approx(1.0 / 630).epsilon(1e-12));
    CHECK(double(beta_fn(5, 5)) >= std::pow(4.0, -10));
    CHECK(check_beta_lower().pass);
}

TEST_CASE("binomial-beta ratio constant") {
    SUBCASE("pointwise value at nu = 1, delta = 1, x = y = 1") {
        // binom(2,1) B(2,2) = 1/3; min(x+1,y+1)^1 = 2 -> pointwise constant 2/3
        double pointwise = 2.0 * double(beta_fn(2, 2)) * 2.0;
        CHECK(pointwise == doctest::Approx(2.0 / 3).epsilon(1e-12));
    }
    SUBCASE("degenerate corner stays finite") {
        CHECK(std::isfinite(double(beta_fn(0.5, 0.5))));
    }
    SUBCASE("grid fit is finite and refinement-stable") {
        for (double nu : {1.0, 2.0})
            for (double delta : {0.5, 1.0, 2.0}) {
                inequality_report rep = check_gamma_ratio(nu, delta);
                INFO(rep.name);
                CHECK(rep.pass);
                CHECK(rep.fitted_constant > 0);
            }
    }
    CHECK_THROWS_AS(check_gamma_ratio(0.5, 1.0), error);
}

TEST_CASE("stirling equivalence constant") {
    SUBCASE("rho = 1 gives exactly 1") {
        inequality_report rep = check_stirling_equiv(1.0, 40);
        CHECK(rep.fitted_constant == 1.0);
        CHECK(rep.pass);
    }
    SUBCASE("rho = 2 containment at m = 3") {
        // (3!)^2 = 36, Gamma(7) = 720: ratio 0.05 within [C^-3, C^3] for C = 3
        double ratio = 36.0 / 720.0;
        CHECK(ratio > std::pow(3.0, -3));
        CHECK(ratio < std::pow(3.0, 3));
        inequality_report rep = check_stirling_equiv(2.0, 40);
        CHECK(rep.pass);
        CHECK(std::pow(rep.fitted_constant, -3) <= ratio + 1e-12);
    }
    SUBCASE("rho = 1.5 stable when m_max doubles") {
        double c40 = check_stirling_equiv(1.5, 40).fitted_constant;
        double c80 = check_stirling_equiv(1.5, 80).fitted_constant;
        CHECK(std::abs(c80 - c40) / c40 < 0.05);
    }
    CHECK_THROWS_AS(check_stirling_equiv(0.0, 10), error);
}
