#include "bnf/gevrey.hpp"

#include <algorithm>
#include <cmath>

namespace tnf {

norm_profile make_norm_profile(const homogeneous_part& part, const std::vector<double>& s_grid) {
    norm_profile p;
    p.m = part.degree();
    p.s_grid = s_grid;
    for (double s : s_grid) {
        real sum = 0, best = 0;
        for (const auto& [alpha, series] : part.terms()) {
            real v = modified_norm(series, s).value;
            sum += v;
            best = std::max(best, v);
        }
        p.upper.push_back(sum);
        p.max_single.push_back(best);
    }
    return p;
}

namespace {

struct fit_entry {
    double s = 0;
    int m = 0;
    real d = 0; // log(value) - log Gamma(rho s + (mu-1)(m-1) - rho)
};

constexpr double kLogStep = 0.086643397569993164; // ln(2)/8

bool feasible(const std::vector<fit_entry>& entries, real x, real y) {
    for (const auto& e : entries)
        if (real(e.s) * x + real(e.m - 1) * y < e.d) return false;
    return true;
}

} // namespace

fit_report fit_constants(const std::vector<norm_profile>& profiles, const gevrey_params& params) {
    int max_m = 0;
    size_t grid_pts = 0;
    for (const auto& p : profiles) {
        max_m = std::max(max_m, p.m);
        grid_pts = std::max(grid_pts, p.s_grid.size());
    }
    if (max_m < 3) fail(errc::invalid_argument, "fit_constants: need profiles through m >= 3");
    if (grid_pts < 2) fail(errc::invalid_argument, "fit_constants: need at least 2 s-grid points");

    const real rho = params.rho;
    const real mu = params.mu();
    std::vector<fit_entry> entries;
    for (const auto& p : profiles) {
        if (p.m < 2) continue;
        for (size_t i = 0; i < p.s_grid.size(); ++i) {
            if (!(p.upper[i] > real(0))) continue;
            real garg = rho * real(p.s_grid[i]) + (mu - 1) * real(p.m - 1) - rho;
            entries.push_back({p.s_grid[i], p.m, r_log(p.upper[i]) - log_gamma(garg)});
        }
    }
    if (entries.empty())
        fail(errc::degenerate_input, "fit_constants: all profile entries vanish");

    // Envelope search on the log grid, x = log C1, y = log C2 >= 0.
    int cells = 256;
    for (;;) {
        real xmax = real(kLogStep) * real(cells);
        if (feasible(entries, xmax, xmax)) break;
        cells *= 2;
        if (cells > (1 << 16))
            fail(errc::degenerate_input, "fit_constants: no finite envelope on the search grid");
    }
    real xmax = real(kLogStep) * real(cells);
    // smallest C2 with C1 free, then smallest C1 compatible with it
    int ybest = cells;
    for (int yi = 0; yi <= cells; ++yi)
        if (feasible(entries, xmax, real(kLogStep) * real(yi))) {
            ybest = yi;
            break;
        }
    real y = real(kLogStep) * real(ybest);
    int xbest = cells;
    for (int xi = 0; xi <= cells; ++xi)
        if (feasible(entries, real(kLogStep) * real(xi), y)) {
            xbest = xi;
            break;
        }
    real x = real(kLogStep) * real(xbest);

    fit_report rep;
    rep.c1 = r_exp(x);
    rep.c2 = r_exp(y);
    rep.entries = (int)entries.size();
    rep.worst_margin = -1e30;
    for (const auto& e : entries) {
        real margin = e.d - (real(e.s) * x + real(e.m - 1) * y);
        rep.worst_margin = std::max(rep.worst_margin, margin);
        if (margin > real(0)) ++rep.violations;
    }
    return rep;
}

real fit_b_envelope(const bnf_result& result, const gevrey_params& params,
                    const std::vector<double>& s_grid) {
    if (!result.b_parts)
        fail(errc::degenerate_input, "fit_b_envelope: result was computed without retained B_m");
    if (!(params.C1 > real(0)) || !(params.C2 > real(0)))
        fail(errc::invalid_argument, "fit_b_envelope: fitted (C1, C2) required");
    const real rho = params.rho;
    const real mu = params.mu();
    const real l0t = params.L0 * r_pow(params.L1, real(result.dim + 2));
    const real scale = l0t * params.L1 * params.L1 * params.L2;
    real b0 = 0;
    for (const auto& [m, part] : *result.b_parts) {
        if (m < 3) continue; // the B-form starts at m = 3 (Gamma argument stays positive)
        norm_profile p = make_norm_profile(part, s_grid);
        for (size_t i = 0; i < s_grid.size(); ++i) {
            if (!(p.upper[i] > real(0))) continue;
            real logbound = r_log(scale) + real(s_grid[i]) * r_log(params.C1) +
                            real(m - 2) * r_log(params.C2) +
                            log_gamma(rho * real(s_grid[i]) + (mu - 1) * real(m - 2));
            b0 = std::max(b0, r_exp(r_log(p.upper[i]) - logbound));
        }
    }
    return b0;
}

int optimal_truncation(real i_norm, const gevrey_params& params) {
    if (!(i_norm > real(0))) fail(errc::invalid_argument, "optimal_truncation: |I| must be positive");
    if (!(params.C2 > real(0))) fail(errc::invalid_argument, "optimal_truncation: C2 must be positive");
    real prod = params.C2 * i_norm;
    if (prod >= real(1)) return 2;
    real expo = real(-1) / (params.rho * (params.tau + 1));
    real m = r_round(r_pow(prod, expo));
    return std::max(2, (int)double(m));
}

remainder_estimate remainder_bound(real i_norm, const multi_index& alpha,
                                   const multi_index& beta, real amplitude,
                                   const gevrey_params& params) {
    if (!(i_norm > real(0)) || !(amplitude > real(0)))
        fail(errc::invalid_argument, "remainder_bound: positive inputs required");
    const real mu = params.mu();
    real log_fact_alpha = 0, log_fact_beta = 0;
    for (int a : alpha) log_fact_alpha += log_gamma(real(a + 1));
    for (int b : beta) log_fact_beta += log_gamma(real(b + 1));
    real expo = r_pow(params.C2 * i_norm, real(-1) / (params.rho * (params.tau + 1)));
    remainder_estimate est;
    est.log_value = r_log(amplitude) + real(order_of(alpha)) * r_log(params.C1) +
                    real(order_of(beta)) * r_log(params.C2) + params.rho * log_fact_alpha +
                    (mu - 1) * log_fact_beta - expo;
    est.value = r_exp(est.log_value);
    return est;
}

stability_time stability_time_estimate(real i_norm, const gevrey_params& params) {
    if (!(i_norm > real(0)))
        fail(errc::invalid_argument, "stability_time_estimate: |I| must be positive");
    real expo = r_pow(params.C2 * i_norm, real(-1) / (params.rho * (params.tau + 1)));
    if (!(expo > real(1))) expo = 1; // degenerate floor T = e when C2|I| >= 1
    stability_time st;
    st.log_t = expo;
    st.log10_t = double(expo) / std::log(10.0);
    st.t = r_exp(expo);
    return st;
}

namespace {

homogeneous_part derivative_part(const homogeneous_part& g_m, int axis,
                                 const fourier_config& cfg) {
    homogeneous_part out(g_m.dim(), g_m.degree());
    for (const auto& [alpha, series] : g_m.terms())
        out.set_term(alpha, fs_derivative(series, axis, cfg));
    return out;
}

} // namespace

std::vector<inequality_report> verify_estimate_lemmas(const bnf_result& result,
                                                      const hamiltonian_spec& spec,
                                                      const gevrey_params& params,
                                                      int sample_budget, unsigned seed,
                                                      const std::vector<double>& s_grid) {
    const int n = result.dim;
    const int order = result.order;
    if (order < 4)
        fail(errc::invalid_argument, "verify_estimate_lemmas: result through order >= 4 required");
    if (!(params.C1 > real(0)) || !(params.C2 > real(0)))
        fail(errc::invalid_argument, "verify_estimate_lemmas: fitted (C1, C2) required");
    const real rho = params.rho;
    const real mu = params.mu();
    const fourier_config cfg{};
    std::vector<inequality_report> reports;

    // ---- p = 1: P_s(dg_m/dtheta_j) <= P_{s+1}(g_m), constant exactly 1
    {
        inequality_report rep;
        rep.name = "estimate_p1_derivative";
        rep.grid = "all m, all axes, s in grid";
        double worst = 0;
        bool any = false;
        for (const auto& [m, part] : result.g.parts())
            for (int axis = 1; axis <= n; ++axis) {
                homogeneous_part d = derivative_part(part, axis, cfg);
                for (double s : s_grid) {
                    real lhs = hp_p_norm_sum(d, s);
                    real rhs = hp_p_norm_sum(part, s + 1);
                    if (!(rhs > real(0))) continue;
                    any = true;
                    double ratio = double(lhs / rhs);
                    if (ratio > worst) {
                        worst = ratio;
                        rep.witness = "m=" + std::to_string(m) + " axis=" + std::to_string(axis);
                    }
                }
            }
        rep.worst_ratio = worst;
        rep.pass = !any || worst <= 1.0 + kInequalitySlack;
        reports.push_back(rep);
    }

    // ---- p = 2, 3: smallest C0 with
    //   P_s(prod dg_{m_k}/dth) <= C0^{p-1} C1^{p+s} C2^{M_p}
    //       (M_p!/prod (m_k-1)!)^{-1} Gamma(rho s + (mu-1) M_p)
    rng gen(seed);
    for (int p = 2; p <= 3; ++p) {
        inequality_report rep;
        rep.name = "estimate_p" + std::to_string(p) + "_product";
        rep.grid = std::to_string(sample_budget) + " sampled tuples, s in grid";
        double fitted = 0;
        bool any = false;
        for (int trial = 0; trial < sample_budget; ++trial) {
            std::vector<int> ms(p), axes(p);
            bool ok = true;
            for (int i = 0; i < p; ++i) {
                ms[i] = gen.next_int(2, order - 1);
                axes[i] = gen.next_int(1, n);
                if (!result.g.part(ms[i])) ok = false;
            }
            if (!ok) continue;
            homogeneous_part prod = derivative_part(*result.g.part(ms[0]), axes[0], cfg);
            int mp = ms[0] - 1;
            for (int i = 1; i < p; ++i) {
                prod = hp_multiply(prod, derivative_part(*result.g.part(ms[i]), axes[i], cfg));
                mp += ms[i] - 1;
            }
            real log_ratio = log_gamma(real(mp + 1)); // log(M_p! / prod (m_k-1)!)
            for (int i = 0; i < p; ++i) log_ratio -= log_gamma(real(ms[i]));
            for (double s : s_grid) {
                real lhs = hp_p_norm_sum(prod, s);
                if (!(lhs > real(0))) continue;
                any = true;
                real log_rhs0 = real(p + s) * r_log(params.C1) + real(mp) * r_log(params.C2) -
                                log_ratio + log_gamma(rho * real(s) + (mu - 1) * real(mp));
                double c0 = double(r_exp((r_log(lhs) - log_rhs0) / real(p - 1)));
                if (c0 > fitted) {
                    fitted = c0;
                    rep.witness = "m1=" + std::to_string(ms[0]) + " mp=" + std::to_string(mp) +
                                  " s=" + std::to_string(s);
                }
            }
        }
        rep.fitted_constant = fitted;
        rep.worst_ratio = fitted;
        rep.pass = !any || r_finite(real(fitted));
        reports.push_back(rep);
    }

    // ---- b_alpha attached: smallest K with
    //   P_s(b_alpha prod dg) <= K L0t (e^{mu-1} L2)^{|a|-1} C1^{p+s} C2^{M_p}
    //       (M_p!/prod)^{-1} binom(M_p+|a|-2, |a|-2)^{-1}
    //       Gamma(rho s + (mu-1)(M_p+|a|-2))
    {
        inequality_report rep;
        rep.name = "estimate_balpha_product";
        rep.grid = std::to_string(sample_budget) + " sampled tuples over stored b_alpha";
        const real l0t = params.L0 * r_pow(params.L1, real(n + 2));
        double fitted = 0;
        bool any = false;
        std::vector<std::pair<multi_index, const fourier_series*>> coeff_terms;
        for (const auto& [deg, part] : spec.coeffs().parts())
            for (const auto& [alpha, series] : part.terms())
                coeff_terms.emplace_back(alpha, &series);
        for (int trial = 0; trial < sample_budget && !coeff_terms.empty(); ++trial) {
            int p = gen.next_int(1, 3);
            const auto& [alpha, b_series] = coeff_terms[gen.next_int(0, (int)coeff_terms.size() - 1)];
            const int alen = order_of(alpha);
            std::vector<int> ms(p), axes(p);
            bool ok = true;
            for (int i = 0; i < p; ++i) {
                ms[i] = gen.next_int(2, order - 1);
                axes[i] = gen.next_int(1, n);
                if (!result.g.part(ms[i])) ok = false;
            }
            if (!ok) continue;
            homogeneous_part prod = derivative_part(*result.g.part(ms[0]), axes[0], cfg);
            int mp = ms[0] - 1;
            for (int i = 1; i < p; ++i) {
                prod = hp_multiply(prod, derivative_part(*result.g.part(ms[i]), axes[i], cfg));
                mp += ms[i] - 1;
            }
            // multiply every coefficient series by b_alpha
            homogeneous_part full(n, prod.degree() + alen);
            multi_index shifted(n);
            for (const auto& [gamma, series] : prod.terms()) {
                for (int j = 0; j < n; ++j) shifted[j] = gamma[j] + alpha[j];
                full.add_term(shifted, fs_product(*b_series, series), cfg);
            }
            real log_ratio = log_gamma(real(mp + 1));
            for (int i = 0; i < p; ++i) log_ratio -= log_gamma(real(ms[i]));
            real log_binom = log_gamma(real(mp + alen - 1)) - log_gamma(real(alen - 1)) -
                             log_gamma(real(mp + 1));
            for (double s : s_grid) {
                real lhs = hp_p_norm_sum(full, s);
                if (!(lhs > real(0))) continue;
                any = true;
                real log_rhs0 = r_log(l0t) + real(alen - 1) * ((mu - 1) + r_log(params.L2)) +
                                real(p + s) * r_log(params.C1) + real(mp) * r_log(params.C2) -
                                log_ratio - log_binom +
                                log_gamma(rho * real(s) + (mu - 1) * real(mp + alen - 2));
                double k = double(r_exp(r_log(lhs) - log_rhs0));
                if (k > fitted) {
                    fitted = k;
                    rep.witness = "|alpha|=" + std::to_string(alen) + " p=" + std::to_string(p) +
                                  " s=" + std::to_string(s);
                }
            }
        }
        rep.fitted_constant = fitted;
        rep.worst_ratio = fitted;
        rep.pass = !any || r_finite(real(fitted));
        reports.push_back(rep);
    }

    return reports;
}

} // namespace tnf
