#include <doctest.h>

#include "bnf/engine.hpp"
#include "oracles.hpp"

using namespace tnf;

namespace {

const double kGolden = 1.6180339887498949;

hamiltonian_spec pendulum(double omega0, double eps, double radius = 0.25) {
    fourier_series b2 = fs_linear_combine(cplx(1), fourier_series::constant(1, 0.5), cplx(1),
                                          fourier_series::cosine(1, {1}, real(eps / 2)));
    homogeneous_part h2(1, 2);
    h2.set_term({2}, b2);
    taylor_fourier coeffs(1, 2, 2);
    coeffs.set_part(h2);
    auto w = diophantine_vector::from_empirical({real(omega0)}, 1.0, 60);
    gevrey_params gv;
    gv.tau = 1;
    gv.kappa = w.kappa;
    return hamiltonian_spec(w, coeffs, real(radius), gv);
}

hamiltonian_spec integrable() {
    taylor_fourier coeffs(1, 2, 3);
    homogeneous_part h2(1, 2), h3(1, 3);
    h2.set_term({2}, fourier_series::constant(1, 0.5));
    h3.set_term({3}, fourier_series::constant(1, 0.1));
    coeffs.set_part(h2);
    coeffs.set_part(h3);
    auto w = diophantine_vector::from_empirical({1.0}, 1.0, 60);
    return hamiltonian_spec(w, coeffs, real(0.3), {});
}

double sin_coeff(const fourier_series& u, int k) {
    // coefficient of sin(k theta): u_k = -i a/2  =>  a = -2 Im(u_k)
    return -2.0 * double(u.coeff({k}).im);
}

} // namespace

TEST_CASE("B_m assembly") {
    SUBCASE("m = 2 is the raw quadratic part") {
        hamiltonian_spec spec = pendulum(1.0, 0.5);
        taylor_fourier empty(1, 2, 2);
        homogeneous_part b2 = assemble_bm(spec, empty, 2);
        REQUIRE(b2.term({2}) != nullptr);
        CHECK(double(b2.term({2})->coeff({0}).re) == doctest::Approx(0.5));
        CHECK(double(b2.term({2})->coeff({1}).re) == doctest::Approx(0.125));
    }
    SUBCASE("pendulum B_3 closed form") {
        // with g2 in place: B3 = -(eps/(2 w0)) (cos + eps cos^2) I^3
        const double eps = 0.5, w0 = 1.0;
        hamiltonian_spec spec = pendulum(w0, eps);
        bnf_step_output s2 = bnf_step(spec, taylor_fourier(1, 2, 2), 2);
        taylor_fourier g(1, 2, 3);
        g.set_part(s2.g_m);
        homogeneous_part b3 = assemble_bm(spec, g, 3);
        REQUIRE(b3.term({3}) != nullptr);
        const fourier_series& s = *b3.term({3});
        // -(eps/2)(cos + eps cos^2) = -(eps^2/4) - (eps/2) cos - (eps^2/4) cos2
        CHECK(double(s.coeff({0}).re) == doctest::Approx(-eps * eps / 4).epsilon(1e-13));
        CHECK(double(s.coeff({1}).re) == doctest::Approx(-eps / 4).epsilon(1e-13));
        CHECK(double(s.coeff({2}).re) == doctest::Approx(-eps * eps / 8).epsilon(1e-13));
    }
    SUBCASE("theta-independent coefficients stay theta-independent") {
        hamiltonian_spec spec = integrable();
        taylor_fourier empty(1, 2, 3);
        for (int m = 2; m <= 3; ++m) {
            homogeneous_part bm = assemble_bm(spec, empty, m);
            for (const auto& [alpha, series] : bm.terms())
                CHECK(series.max_mode() == 0);
        }
    }
    SUBCASE("window too short for the requested order rejected") {
        hamiltonian_spec spec = pendulum(1.0, 0.5);
        taylor_fourier narrow(1, 2, 2);
        CHECK_THROWS_AS(assemble_bm(spec, narrow, 4), error);
    }
}

TEST_CASE("bnf_step pendulum closed forms") {
    const double eps = 0.5, w0 = 1.0;
    hamiltonian_spec spec = pendulum(w0, eps);
    bnf_step_output s2 = bnf_step(spec, taylor_fourier(1, 2, 2), 2);
    CHECK(double(fs_mean(*s2.r_m.term({2})).re) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sin_coeff(*s2.g_m.term({2}), 1) == doctest::Approx(-0.25).epsilon(1e-14));

    taylor_fourier g(1, 2, 3);
    g.set_part(s2.g_m);
    bnf_step_output s3 = bnf_step(spec, g, 3);
    CHECK(double(fs_mean(*s3.r_m.term({3})).re) == doctest::Approx(-0.0625).epsilon(1e-13));
    CHECK(sin_coeff(*s3.g_m.term({3}), 1) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(sin_coeff(*s3.g_m.term({3}), 2) == doctest::Approx(0.25 * 0.125).epsilon(1e-13));

    SUBCASE("theta-independent input gives g = 0, R = B") {
        hamiltonian_spec flat = integrable();
        bnf_step_output s = bnf_step(flat, taylor_fourier(1, 2, 2), 2);
        CHECK(s.g_m.empty());
        CHECK(double(fs_mean(*s.r_m.term({2})).re) == doctest::Approx(0.5));
    }
}

TEST_CASE("bnf_run oracle equivalence on the pendulum family") {
    for (double w0 : {1.0, kGolden})
        for (double eps : {0.1, 0.25, 0.5}) {
            INFO("omega0=", w0, " eps=", eps);
            hamiltonian_spec spec = pendulum(w0, eps);
            bnf_result res = bnf_run(spec, 4);
            test::pendulum_forms oracle{w0, eps};

            CHECK(double(res.normal_form_coeff(2, {2})) ==
                  doctest::Approx(oracle.r2()).epsilon(1e-12));
            CHECK(double(res.normal_form_coeff(3, {3})) ==
                  doctest::Approx(oracle.r3()).epsilon(1e-12));
            CHECK(double(res.normal_form_coeff(4, {4})) ==
                  doctest::Approx(oracle.r4()).epsilon(1e-12));

            auto check_g = [&](int m, const std::vector<double>& sines) {
                const fourier_series* gm = res.g.part(m)->term({m});
                REQUIRE(gm != nullptr);
                for (size_t k = 0; k < sines.size(); ++k) {
                    INFO("m=", m, " k=", k + 1);
                    CHECK(sin_coeff(*gm, (int)k + 1) ==
                          doctest::Approx(sines[k]).epsilon(1e-12));
                }
            };
            check_g(2, oracle.g2_sin());
            check_g(3, oracle.g3_sin());
            check_g(4, oracle.g4_sin());
        }
}

TEST_CASE("normal form matches the action-integral inversion oracle") {
    // independent route: invert the quadrature series I(E) for H0(I)
    for (double eps : {0.25, 0.5}) {
        hamiltonian_spec spec = pendulum(1.0, eps);
        bnf_result res = bnf_run(spec, 6);
        std::vector<double> h0 = test::pendulum_h0_coeffs(1.0, eps, 6);
        for (int m = 2; m <= 6; ++m) {
            INFO("eps=", eps, " m=", m);
            CHECK(double(res.normal_form_coeff(m, {m})) ==
                  doctest::Approx(h0[m]).epsilon(1e-10));
        }
    }
}

TEST_CASE("bnf_run bookkeeping") {
    hamiltonian_spec spec = pendulum(1.0, 0.5);
    bnf_result res = bnf_run(spec, 5);

    SUBCASE("homological residuals and mean normalization") {
        for (const auto& l : res.logs) CHECK(double(l.max_residual) < 1e-10);
        for (const auto& [m, part] : res.g.parts())
            for (const auto& [alpha, series] : part.terms())
                CHECK(double(abs(fs_mean(series))) == 0.0);
    }
    SUBCASE("reality and degree bookkeeping") {
        for (const auto& [m, part] : res.g.parts()) {
            CHECK(part.degree() == m);
            for (const auto& [alpha, series] : part.terms()) {
                CHECK(order_of(alpha) == m);
                CHECK(series.is_real());
                for (const auto& [k, c] : series.coeffs())
                    CHECK(double(abs(series.coeff(negate(k)) - conj(c))) < 1e-14);
            }
        }
        for (const auto& [m, part] : res.normal_form)
            for (const auto& [alpha, series] : part.terms()) CHECK(series.max_mode() == 0);
    }
    SUBCASE("per-order logs present") {
        CHECK(res.logs.size() == 4);
        CHECK(res.logs[0].m == 2);
        CHECK(double(res.logs[0].min_divisor) == doctest::Approx(1.0));
        for (const auto& l : res.logs) CHECK(double(l.discarded_mass) == 0.0);
    }
    SUBCASE("B retention default: on at low order") {
        CHECK(res.b_parts.has_value());
        engine_options opts;
        opts.retain_b = 0;
        CHECK_FALSE(bnf_run(spec, 3, opts).b_parts.has_value());
    }
}

TEST_CASE("bnf_run on the integrable spec") {
    bnf_result res = bnf_run(integrable(), 5);
    CHECK(res.g.empty());
    CHECK(double(res.normal_form_coeff(2, {2})) == doctest::Approx(0.5));
    CHECK(double(res.normal_form_coeff(3, {3})) == doctest::Approx(0.1));
    CHECK(double(res.normal_form_coeff(4, {4})) == 0.0);
}

TEST_CASE("bnf_run base case M = 2") {
    bnf_result res = bnf_run(pendulum(1.0, 0.5), 2);
    CHECK(res.logs.size() == 1);
    CHECK(res.order == 2);
}

TEST_CASE("resonant frequency aborts with a partial result") {
    fourier_series b2 = fs_linear_combine(cplx(1), fourier_series::constant(2, 0.5), cplx(1),
                                          fourier_series::cosine(2, {1, -2}, 0.2));
    homogeneous_part h2(2, 2);
    h2.set_term({2, 0}, b2);
    taylor_fourier coeffs(2, 2, 2);
    coeffs.set_part(h2);
    diophantine_vector w;
    w.omega = {1.0, 0.5};
    w.kappa = real(1e-3); // bogus but positive; the divisor floor still trips
    w.tau = 1.2;
    w.verified_horizon = 2;
    hamiltonian_spec spec(w, coeffs, real(0.1), {});
    bnf_result res = bnf_run(spec, 3);
    CHECK(res.resonant_abort);
    CHECK(res.order < 3);
    CHECK_FALSE(res.error_message.empty());
}

TEST_CASE("golden 2-d recursion stays real with positive divisors") {
    fourier_series b20 = fs_linear_combine(cplx(1), fourier_series::constant(2, 0.5), cplx(1),
                                           fourier_series::cosine(2, {1, 0}, 0.2));
    fourier_series b11 = fs_linear_combine(cplx(1), fourier_series::constant(2, 0.3), cplx(1),
                                           fourier_series::cosine(2, {1, -1}, 0.1));
    fourier_series b02 = fs_linear_combine(cplx(1), fourier_series::constant(2, 0.5), cplx(1),
                                           fourier_series::cosine(2, {0, 1}, 0.2));
    homogeneous_part h2(2, 2);
    h2.set_term({2, 0}, b20);
    h2.set_term({1, 1}, b11);
    h2.set_term({0, 2}, b02);
    taylor_fourier coeffs(2, 2, 2);
    coeffs.set_part(h2);
    auto w = diophantine_vector::from_empirical({1.0, real(kGolden)}, 1.2, 50);
    hamiltonian_spec spec(w, coeffs, real(0.05), {});
    bnf_result res = bnf_run(spec, 4);
    CHECK_FALSE(res.resonant_abort);
    for (const auto& l : res.logs) {
        CHECK(double(l.max_residual) < 1e-10);
        CHECK(double(l.min_divisor) > 0.0);
    }
    for (const auto& [m, part] : res.g.parts())
        for (const auto& [alpha, series] : part.terms()) CHECK(series.is_real());
    // every alpha of each degree appears in R_m for a generic input
    CHECK(res.normal_form.at(2).terms().size() == 3);
}

TEST_CASE("coefficients above the requested order are ignored") {
    // a degree-5 term cannot reach any homogeneous degree <= 3
    fourier_series b2 = fs_linear_combine(cplx(1), fourier_series::constant(1, 0.5), cplx(1),
                                          fourier_series::cosine(1, {1}, 0.25));
    homogeneous_part h2(1, 2), h5(1, 5);
    h2.set_term({2}, b2);
    h5.set_term({5}, fourier_series::cosine(1, {2}, 3.0));
    taylor_fourier with_high(1, 2, 5);
    with_high.set_part(h2);
    with_high.set_part(h5);
    taylor_fourier without(1, 2, 2);
    without.set_part(h2);
    auto w = diophantine_vector::from_empirical({1.0}, 1.0, 60);
    bnf_result a = bnf_run(hamiltonian_spec(w, with_high, real(0.25), {}), 3);
    bnf_result b = bnf_run(hamiltonian_spec(w, without, real(0.25), {}), 3);
    for (int m = 2; m <= 3; ++m)
        CHECK(double(a.normal_form_coeff(m, {m})) == double(b.normal_form_coeff(m, {m})));
}
