#include "bnf/gammafn.hpp"

#include <algorithm>
#include <cstdio>

#include "bnf/util.hpp"

namespace tnf {

namespace {

// Lanczos approximation, g = 7, 9 terms.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

const real kHalfLog2Pi = real(0.91893853320467274178032973640562); // log(2*pi)/2

real lanczos_log_gamma(real x) {
    // valid for x >= 0.5
    real z = x - real(1);
    real a = real(kLanczos[0]);
    for (int i = 1; i < 9; ++i) a += real(kLanczos[i]) / (z + real(i));
    real t = z + real(kLanczosG) + real(0.5);
    return kHalfLog2Pi + (z + real(0.5)) * r_log(t) - t + r_log(a);
}

std::string point2(double x, double y) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", x, y);
    return buf;
}

} // namespace

real log_gamma(real x) {
    if (!(x > real(0))) fail(errc::invalid_argument, "log_gamma: argument must be positive");
    if (x < real(0.5)) return lanczos_log_gamma(x + real(1)) - r_log(x);
    return lanczos_log_gamma(x);
}

real log_beta(real x, real y) {
    if (!(x > real(0)) || !(y > real(0)))
        fail(errc::invalid_argument, "beta: arguments must be positive");
    return log_gamma(x) + log_gamma(y) - log_gamma(x + y);
}

real beta_fn(real x, real y) { return r_exp(log_beta(x, y)); }

inequality_report check_gamma_beta_identity(unsigned seed, int samples) {
    inequality_report rep;
    rep.name = "gamma_beta_identity";
    rep.grid = std::to_string(samples) + " log-uniform samples in (0.05, 50)^2";
    rng gen(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double x = 0.05 * std::pow(1000.0, gen.next_double());
        double y = 0.05 * std::pow(1000.0, gen.next_double());
        real lhs = log_gamma(real(x)) + log_gamma(real(y));
        real rhs = log_gamma(real(x + y)) + log_beta(real(x), real(y));
        double rel = double(r_abs(r_exp(lhs - rhs) - real(1)));
        if (rel > worst) {
            worst = rel;
            rep.witness = point2(x, y);
        }
    }
    rep.worst_ratio = 1.0 + worst;
    rep.pass = worst <= kInequalitySlack;
    return rep;
}

inequality_report check_beta_cauchy() {
    inequality_report rep;
    rep.name = "beta_cauchy";
    rep.grid = "a,b,c,d in {0.25, 0.5, 1, 2, 5}";
    const double pts[5] = {0.25, 0.5, 1.0, 2.0, 5.0};
    double worst = 0.0;
    for (double a : pts)
        for (double b : pts)
            for (double c : pts)
                for (double d : pts) {
                    real lhs = log_beta(real(a + b), real(c + d));
                    real rhs = real(0.5) * (log_beta(real(2 * a), real(2 * c)) +
                                            log_beta(real(2 * b), real(2 * d)));
                    double ratio = double(r_exp(lhs - rhs));
                    if (ratio > worst) {
                        worst = ratio;
                        rep.witness = point2(a, b) + point2(c, d);
                    }
                }
    rep.worst_ratio = worst;
    rep.pass = worst <= 1.0 + kInequalitySlack;
    return rep;
}

inequality_report check_beta_lower() {
    inequality_report rep;
    rep.name = "beta_lower_4pow";
    rep.grid = "x,y log grid [0.1, 20], 41 points/axis";
    const real log4 = r_log(real(4));
    double worst = 0.0;
    const int npts = 41;
    for (int i = 0; i < npts; ++i)
        for (int j = 0; j < npts; ++j) {
            double x = 0.1 * std::pow(200.0, i / double(npts - 1));
            double y = 0.1 * std::pow(200.0, j / double(npts - 1));
            // inequality B(x,y) >= 4^{-x-y}; ratio is RHS/LHS
            double ratio = double(r_exp(-(real(x) + real(y)) * log4 - log_beta(real(x), real(y))));
            if (ratio > worst) {
                worst = ratio;
                rep.witness = point2(x, y);
            }
        }
    rep.worst_ratio = worst;
    rep.pass = worst <= 1.0 + kInequalitySlack;
    return rep;
}

namespace {

double gamma_ratio_constant(double nu, double delta, double grid_max, double grid_step,
                            std::string* witness) {
    double best = 0.0;
    int steps = int(grid_max / grid_step + 0.5);
    for (int i = 0; i <= steps; ++i)
        for (int j = i; j <= steps; ++j) { // symmetric in (x,y)
            double x = i * grid_step;
            double y = j * grid_step;
            real logbinom = log_gamma(real(std::floor(x) + std::floor(y) + 1)) -
                            log_gamma(real(std::floor(x) + 1)) -
                            log_gamma(real(std::floor(y) + 1));
            real lhs = real(nu) * logbinom + log_beta(real(nu * x + delta), real(nu * y + delta));
            real penalty = real(0.5 * (nu + 1)) * r_log(real(std::min(x, y) + 1));
            double c = double(r_exp(lhs + penalty));
            if (c > best) {
                best = c;
                if (witness) *witness = point2(x, y);
            }
        }
    return best;
}

} // namespace

inequality_report check_gamma_ratio(double nu, double delta, double grid_max, double grid_step) {
    if (nu < 1.0 || delta <= 0.0)
        fail(errc::invalid_argument, "check_gamma_ratio: need nu >= 1, delta > 0");
    inequality_report rep;
    rep.name = "gamma_ratio_nu" + std::to_string(nu) + "_delta" + std::to_string(delta);
    rep.grid = "x,y in [0," + std::to_string(grid_max) + "] step " + std::to_string(grid_step);
    double coarse = gamma_ratio_constant(nu, delta, grid_max, grid_step, &rep.witness);
    double fine = gamma_ratio_constant(nu, delta, grid_max, grid_step / 2, nullptr);
    rep.fitted_constant = std::max(coarse, fine);
    rep.worst_ratio = fine / coarse;
    rep.pass = r_finite(real(rep.fitted_constant)) && fine <= coarse * 1.05;
    return rep;
}

inequality_report check_stirling_equiv(double rho, int m_max) {
    if (!(rho > 0.0)) fail(errc::invalid_argument, "check_stirling_equiv: rho must be positive");
    inequality_report rep;
    rep.name = "stirling_equiv_rho" + std::to_string(rho);
    rep.grid = "m = 1.." + std::to_string(m_max);
    real worst_log = 0;
    int worst_m = 1;
    for (int m = 1; m <= m_max; ++m) {
        // (m!)^rho vs Gamma(rho m + 1); C must absorb |log ratio| / m
        real diff = r_abs(real(rho) * log_gamma(real(m + 1)) - log_gamma(real(rho * m + 1))) / real(m);
        if (diff > worst_log) {
            worst_log = diff;
            worst_m = m;
        }
    }
    rep.fitted_constant = double(r_exp(worst_log));
    rep.worst_ratio = rep.fitted_constant;
    rep.witness = "m=" + std::to_string(worst_m);
    rep.pass = r_finite(real(rep.fitted_constant));
    return rep;
}

} // namespace tnf
