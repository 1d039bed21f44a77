#pragma once

#include "bnf/fourier.hpp"
#include "bnf/gammafn.hpp"

namespace tnf {

// Random real trigonometric polynomial: `n_modes` distinct modes with
// |k| <= mode_radius, amplitudes in [-1, 1], Hermitian pairs mirrored.
fourier_series random_trig_poly(rng& gen, int dim, int mode_radius, int n_modes,
                                bool mean_zero);

// Reference omega used by the seeded suites: golden-ratio based,
// strongly non-resonant in every tested dimension.
std::vector<real> reference_omega(int dim);

// S_s(u) <= kappa^-1 S_{s+tau}(f) for u the homological solution, with
// kappa estimated over the support of f.  Also reports the residual
// identity L_w u = f (relative S_0).
struct homological_check_result {
    inequality_report bound;    // S version
    inequality_report bound_p;  // P version (modified norms)
    inequality_report residual; // L_w u vs f
};
homological_check_result check_homological_bound(unsigned seed, int count,
                                                 const std::vector<double>& s_grid);

// S_s(uv) <= S_s(u) S_s(v); the binomial-sum product bound; and the
// modified-norm sup bound with C~ = 8 pi^2 / 3.
std::vector<inequality_report> check_product_bounds(unsigned seed, int count,
                                                    const std::vector<double>& s_grid);

// P_s(d^a u) <= P_{s+|a|}(u) for |a| <= 3.
inequality_report check_derivative_compat(unsigned seed, int count,
                                          const std::vector<double>& s_grid);

// Q_[s]-grid(u) <= P_s(u); the reverse direction (through the Fourier
// upper bound for Q) is reported with its fitted constant only.
std::vector<inequality_report> check_sandwich(unsigned seed, int count,
                                              const std::vector<double>& s_grid);

// Exact identity: enumeration of N(alpha,m) weights vs the closed form,
// all dims <= max_dim, 2 <= |alpha| <= m <= max_m.
inequality_report check_combinatorics(int max_dim = 3, int max_m = 12);

} // namespace tnf
