#pragma once

#include "bnf/engine.hpp"
#include "bnf/gammafn.hpp"

namespace tnf {

// P_s profile of one homogeneous order, aggregated over the action
// multi-indices.  `upper` is the polydisc majorant sum_alpha P_s(c_alpha);
// `max_single` the largest single-alpha value as a lower reference.
struct norm_profile {
    int m = 0;
    std::vector<double> s_grid;
    std::vector<real> upper;
    std::vector<real> max_single;
};

norm_profile make_norm_profile(const homogeneous_part& part, const std::vector<double>& s_grid);

struct fit_report {
    real c1 = 0;
    real c2 = 0;
    int entries = 0;
    int violations = 0; // post-fit recheck; must be 0
    real worst_margin = 0; // max of log(value) - log(bound) over entries (<= 0 when certified)
};

// Smallest (C1, C2) on a log grid (step 2^{1/8}) with
//   P_s(g_m) <= C1^s C2^{m-1} Gamma(rho s + (mu-1)(m-1) - rho)
// for every profile entry: C2 is minimized first, then C1.
// Throws degenerate_input when every profile entry vanishes.
fit_report fit_constants(const std::vector<norm_profile>& profiles, const gevrey_params& params);

// Envelope constant for the B_m form (m >= 3):
//   P_s(B_m) <= B0 * L0t L1^2 L2 * C1^s C2^{m-2} Gamma(rho s + (mu-1)(m-2))
// with L0t = L0 L1^{n+2}; returns the smallest B0 over the stored orders.
real fit_b_envelope(const bnf_result& result, const gevrey_params& params,
                    const std::vector<double>& s_grid);

// m* = max(2, round((C2 |I|)^{-1/(rho(tau+1))})); 2 when C2 |I| >= 1.
int optimal_truncation(real i_norm, const gevrey_params& params);

struct remainder_estimate {
    real log_value = 0; // natural log
    real value = 0;     // exp, may be 0/inf at extremes
};

// A C1^{|alpha|} C2^{|beta|} (alpha!)^rho (beta!)^{mu-1}
//   * exp(-(C2 |I|)^{-1/(rho(tau+1))}), computed in log space.
remainder_estimate remainder_bound(real i_norm, const multi_index& alpha,
                                   const multi_index& beta, real amplitude,
                                   const gevrey_params& params);

struct stability_time {
    real log_t = 0;   // natural log of T, clamped at 1 (T = e floor)
    double log10_t = 0;
    real t = 0;       // exp(log_t), inf-guarded
};

// T = exp((C2 |I|)^{-1/(rho(tau+1))})
stability_time stability_time_estimate(real i_norm, const gevrey_params& params);

// Spot checks of the product estimates feeding the Gevrey recursion:
// p = 1 must hold with constant 1 (P_s(dg/dtheta_j) <= P_{s+1}(g));
// p = 2, 3 and the b_alpha-attached form report the smallest constant
// making the sampled tuples pass (finite-constant existence, delta = mu-2).
std::vector<inequality_report> verify_estimate_lemmas(const bnf_result& result,
                                                      const hamiltonian_spec& spec,
                                                      const gevrey_params& params,
                                                      int sample_budget, unsigned seed,
                                                      const std::vector<double>& s_grid);

} // namespace tnf
