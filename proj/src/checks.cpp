#include "bnf/checks.hpp"

#include <algorithm>
#include <cmath>

#include "bnf/series.hpp"

namespace tnf {

fourier_series random_trig_poly(rng& gen, int dim, int mode_radius, int n_modes, bool mean_zero) {
    fourier_series::coeff_map coeffs;
    int placed = 0, guard = 0;
    while (placed < n_modes && guard++ < n_modes * 50) {
        mode_index k(dim);
        int budget = mode_radius;
        for (int j = 0; j < dim; ++j) {
            k[j] = gen.next_int(-budget, budget);
            budget -= k[j] < 0 ? -k[j] : k[j];
        }
        if (order_of(k) == 0) {
            if (mean_zero) continue;
            coeffs[k] = cplx(real(gen.next_symmetric()), 0);
            ++placed;
            continue;
        }
        cplx c(real(gen.next_symmetric()), real(gen.next_symmetric()));
        coeffs[k] = coeffs[k] + c;
        coeffs[negate(k)] = coeffs[negate(k)] + conj(c);
        ++placed;
    }
    return fourier_series(dim, true, coeffs);
}

std::vector<real> reference_omega(int dim) {
    // 1, golden ratio, and a cubic irrational; pairwise strongly non-resonant
    static const double base[3] = {1.0, 1.6180339887498949, 1.3247179572447460};
    std::vector<real> w;
    for (int j = 0; j < dim; ++j) w.push_back(real(base[j % 3]));
    return w;
}

namespace {

real support_kappa(const fourier_series& f, const std::vector<real>& omega, real tau) {
    real best = -1;
    for (const auto& [k, c] : f.coeffs()) {
        int ord = order_of(k);
        if (ord == 0) continue;
        real dot = 0;
        for (size_t j = 0; j < omega.size(); ++j) dot += omega[j] * real(k[j]);
        real v = r_abs(dot) * r_pow(real(ord), tau);
        if (best < real(0) || v < best) best = v;
    }
    return best < real(0) ? real(1) : best;
}

void track(inequality_report& rep, double ratio, const std::string& witness) {
    if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.witness = witness;
    }
}

} // namespace

homological_check_result check_homological_bound(unsigned seed, int count,
                                                 const std::vector<double>& s_grid) {
    homological_check_result out;
    out.bound.name = "homological_bound_S";
    out.bound_p.name = "homological_bound_P";
    out.residual.name = "homological_residual";
    std::string grid = std::to_string(count) + " random mean-zero polys, dims 1-2";
    out.bound.grid = out.bound_p.grid = out.residual.grid = grid;

    rng gen(seed);
    for (int i = 0; i < count; ++i) {
        int dim = 1 + (i % 2);
        real tau = real(dim - 1) + real(0.2) + real(0.8) * real(gen.next_double());
        int radius = 3 + gen.next_int(0, 17);
        int modes = 2 + gen.next_int(0, 8);
        fourier_series f = random_trig_poly(gen, dim, radius, modes, true);
        if (f.empty()) continue;
        std::vector<real> omega = reference_omega(dim);
        real kap = support_kappa(f, omega, tau);
        diophantine_vector w;
        w.omega = omega;
        w.kappa = kap < real(1) ? kap : real(1);
        w.tau = tau;
        w.verified_horizon = radius;
        fourier_series u = solve_homological(f, w);
        std::string at = "sample " + std::to_string(i);
        for (double s : s_grid) {
            real lhs = wiener_norm(u, s).value;
            real rhs = wiener_norm(f, s + double(tau)).value / kap;
            if (rhs > real(0)) track(out.bound, double(lhs / rhs), at);
            real lhs_p = modified_norm(u, s).value;
            real rhs_p = modified_norm(f, s + double(tau)).value / kap;
            if (rhs_p > real(0)) track(out.bound_p, double(lhs_p / rhs_p), at);
        }
        fourier_series lu = fs_lomega(u, omega);
        fourier_series diff = fs_linear_combine(cplx(1), lu, cplx(-1), f);
        real s0 = wiener_norm(f, 0).value;
        if (s0 > real(0))
            track(out.residual, 1.0 + double(wiener_norm(diff, 0).value / s0), at);
    }
    out.bound.pass = out.bound.worst_ratio <= 1.0 + kInequalitySlack;
    out.bound_p.pass = out.bound_p.worst_ratio <= 1.0 + kInequalitySlack;
    out.residual.pass = out.residual.worst_ratio <= 1.0 + kInequalitySlack;
    return out;
}

std::vector<inequality_report> check_product_bounds(unsigned seed, int count,
                                                    const std::vector<double>& s_grid) {
    inequality_report algebra, lemma, modified;
    algebra.name = "product_algebra_S";
    lemma.name = "product_binomial_sum";
    modified.name = "product_modified_sup";
    std::string grid = std::to_string(count) + " random pairs, dims 1-2";
    algebra.grid = lemma.grid = modified.grid = grid;
    const double c_tilde = 8.0 * M_PI * M_PI / 3.0;

    rng gen(seed);
    for (int i = 0; i < count; ++i) {
        int dim = 1 + (i % 2);
        int radius = 2 + gen.next_int(0, 10);
        fourier_series u = random_trig_poly(gen, dim, radius, 2 + gen.next_int(0, 6), false);
        fourier_series v = random_trig_poly(gen, dim, radius, 2 + gen.next_int(0, 6), false);
        if (u.empty() || v.empty()) continue;
        fourier_series uv = fs_product(u, v);
        std::string at = "sample " + std::to_string(i);
        for (double s : s_grid) {
            real lhs = wiener_norm(uv, s).value;
            real rhs_algebra = wiener_norm(u, s).value * wiener_norm(v, s).value;
            if (rhs_algebra > real(0)) track(algebra, double(lhs / rhs_algebra), at);

            int si = (int)std::floor(s);
            real sum = 0;
            for (int m = 0; m <= si; ++m) {
                real b = real((double)binomial_i64(si, m));
                sum += b * (wiener_norm(u, s - m).value * wiener_norm(v, m).value +
                            wiener_norm(v, s - m).value * wiener_norm(u, m).value);
            }
            real rhs_lemma = real(2) * sum;
            if (rhs_lemma > real(0)) track(lemma, double(lhs / rhs_lemma), at);

            real lhs_p = modified_norm(uv, s).value;
            real sup = 0;
            for (int m = 0; m <= si; ++m) {
                real b = real((double)binomial_i64(si, m));
                real term = b * (modified_norm(u, s - m).value * modified_norm(v, m).value +
                                 modified_norm(v, s - m).value * modified_norm(u, m).value);
                sup = std::max(sup, term);
            }
            real rhs_mod = real(c_tilde) * sup;
            if (rhs_mod > real(0)) track(modified, double(lhs_p / rhs_mod), at);
        }
    }
    for (auto* rep : {&algebra, &lemma, &modified})
        rep->pass = rep->worst_ratio <= 1.0 + kInequalitySlack;
    return {algebra, lemma, modified};
}

inequality_report check_derivative_compat(unsigned seed, int count,
                                          const std::vector<double>& s_grid) {
    inequality_report rep;
    rep.name = "derivative_norm_compat";
    rep.grid = std::to_string(count) + " random polys, |a| <= 3";
    rng gen(seed);
    for (int i = 0; i < count; ++i) {
        int dim = 1 + (i % 2);
        fourier_series u = random_trig_poly(gen, dim, 2 + gen.next_int(0, 8),
                                            2 + gen.next_int(0, 6), false);
        if (u.empty()) continue;
        for (int len = 1; len <= 3; ++len)
            for (const auto& a : multi_indices_of_degree(dim, len)) {
                fourier_series d = u;
                for (int j = 0; j < dim; ++j)
                    for (int e = 0; e < a[j]; ++e) d = fs_derivative(d, j + 1);
                for (double s : s_grid) {
                    real lhs = modified_norm(d, s).value;
                    real rhs = modified_norm(u, s + len).value;
                    if (rhs > real(0))
                        track(rep, double(lhs / rhs),
                              "sample " + std::to_string(i) + " a=" + index_to_string(a));
                }
            }
    }
    rep.pass = rep.worst_ratio <= 1.0 + kInequalitySlack;
    return rep;
}

std::vector<inequality_report> check_sandwich(unsigned seed, int count,
                                              const std::vector<double>& s_grid) {
    inequality_report lower, upper;
    lower.name = "sandwich_qgrid_le_P";
    upper.name = "sandwich_upper_fitted"; // informational: Q replaced by its Fourier majorant
    lower.grid = upper.grid = std::to_string(count) + " random polys";
    fourier_config cfg;
    cfg.qgrid_points = 64; // the grid side is a lower estimate; coarse is fine here
    rng gen(seed);
    double fitted = 0;
    for (int i = 0; i < count; ++i) {
        int dim = 1 + (i % 2);
        fourier_series u = random_trig_poly(gen, dim, 2 + gen.next_int(0, 5),
                                            2 + gen.next_int(0, 5), false);
        if (u.empty()) continue;
        for (double s : s_grid) {
            int si = (int)std::floor(s);
            real q = sup_derivative_bound(u, si, q_mode::grid, cfg).value;
            real p = modified_norm(u, s).value;
            if (p > real(0)) track(lower, double(q / p), "sample " + std::to_string(i));
            // P_s <= C0 (2en)^[s] (Q_{[s]+n+2} + Q_0) with the upper-bound Q
            real qa = sup_derivative_bound(u, si + dim + 2, q_mode::upper, cfg).value;
            real q0 = sup_derivative_bound(u, 0, q_mode::upper, cfg).value;
            double envelope = std::pow(2.0 * M_E * dim, si) * double(qa + q0);
            if (envelope > 0) fitted = std::max(fitted, double(p) / envelope);
        }
    }
    lower.pass = lower.worst_ratio <= 1.0 + kInequalitySlack;
    upper.fitted_constant = fitted;
    upper.worst_ratio = fitted;
    upper.pass = std::isfinite(fitted);
    return {lower, upper};
}

inequality_report check_combinatorics(int max_dim, int max_m) {
    inequality_report rep;
    rep.name = "index_set_weight_identity";
    rep.grid = "dims 1.." + std::to_string(max_dim) + ", 2 <= |alpha| <= m <= " +
               std::to_string(max_m);
    long long checked = 0;
    for (int dim = 1; dim <= max_dim; ++dim)
        for (int m = 2; m <= max_m; ++m)
            for (int len = 2; len <= m; ++len)
                for (const auto& alpha : multi_indices_of_degree(dim, len)) {
                    std::int64_t lhs = multinomial_weight_sum(alpha, m);
                    std::int64_t rhs = multinomial_weight_closed_form(alpha, m);
                    ++checked;
                    if (lhs != rhs) {
                        rep.worst_ratio = 2;
                        rep.pass = false;
                        rep.witness = "alpha=" + index_to_string(alpha) + " m=" + std::to_string(m);
                        return rep;
                    }
                }
    rep.worst_ratio = 1;
    rep.pass = true;
    rep.witness = std::to_string(checked) + " identities, exact";
    return rep;
}

} // namespace tnf
