#pragma once

#include <optional>
#include <string>

#include "bnf/series.hpp"

namespace tnf {

// Gevrey bookkeeping attached to a problem: exponents, the Diophantine
// pair, input-coefficient constants, and the fitted output constants.
// mu is always recomputed from rho and tau, never stored.
struct gevrey_params {
    real rho = 1;
    real tau = 1;
    real kappa = 1;
    real L0 = 1, L1 = 1, L2 = 1;
    real C1 = 0, C2 = 0; // outputs of the envelope fit (0 = not fitted yet)

    real mu() const { return rho * (tau + 1) + 1; }
};

// Hamiltonian in prepared coordinates: H = <omega, r> + sum_{m>=2} H_m,
// H_m = sum_{|alpha|=m} b_alpha(theta) r^alpha.  `coeffs` carries the
// b_alpha with m_min = 2; degree-0/1 parts are rejected at ingestion.
class hamiltonian_spec {
  public:
    hamiltonian_spec(diophantine_vector omega, taylor_fourier coeffs, real domain_radius,
                     gevrey_params gevrey);

    int dim() const { return coeffs_.dim(); }
    const diophantine_vector& omega() const { return omega_; }
    const taylor_fourier& coeffs() const { return coeffs_; }
    real domain_radius() const { return domain_radius_; }
    const gevrey_params& gevrey() const { return gevrey_; }
    int max_degree() const { return coeffs_.m_max(); }

    // largest |k| over all coefficient series (>= 1)
    int k_input() const { return k_input_; }

  private:
    diophantine_vector omega_;
    taylor_fourier coeffs_;
    real domain_radius_;
    gevrey_params gevrey_;
    int k_input_;
};

struct engine_options {
    int kmax_per_order = 64; // per-grade mode budget is min(k_input, this) * grade
    int retain_b = -1;       // -1: retain B_m when order <= 8; 0/1 force off/on
    fourier_config fourier;
};

struct order_log {
    int m = 0;
    real min_divisor = 0;    // smallest |<omega,k>| over this order's solves
    real discarded_mass = 0; // convolution mass dropped by the mode cap
    real max_residual = 0;   // max_alpha S0(L_w g + B - R) / S0(B)
};

struct bnf_result {
    int dim = 0;
    int order = 0;
    diophantine_vector omega;
    gevrey_params gevrey;
    real domain_radius = 0;

    taylor_fourier g;                              // grades 2..order, mean-zero coefficients
    std::map<int, homogeneous_part> normal_form;   // R_m as constant-coefficient parts
    std::optional<std::map<int, homogeneous_part>> b_parts;
    std::vector<order_log> logs;

    bool resonant_abort = false;
    std::string error_message;

    bnf_result() : g(1, 2, 2) {}

    // R_m coefficient of I^alpha (0 when absent)
    real normal_form_coeff(int m, const multi_index& alpha) const;

    // H0(I) = <omega, I> + sum_m R_m(I)
    template <typename S>
    S eval_h0(const std::vector<S>& actions) const;
};

struct bnf_step_output {
    homogeneous_part b_m;
    homogeneous_part g_m;
    homogeneous_part r_m;
    order_log log;
};

// B_m of the recursion: sum_{2<=|alpha|<=m} b_alpha(theta) * A_{alpha,m},
// where A develops (I + d g/d theta)^alpha from the lower-order g.
homogeneous_part assemble_bm(const hamiltonian_spec& spec, const taylor_fourier& g_lower, int m,
                             const engine_options& opts = {}, real* discarded = nullptr);

// Splits B_m into its angular average R_m and solves
// L_omega g_m = R_m - B_m with <g_m> = 0.
bnf_step_output bnf_step(const hamiltonian_spec& spec, const taylor_fourier& g_lower, int m,
                         const engine_options& opts = {});

// Runs orders m = 2..order; on a resonant divisor the partial result is
// returned with resonant_abort set instead of throwing.
bnf_result bnf_run(const hamiltonian_spec& spec, int order, const engine_options& opts = {});

// Flattened term list for fast repeated evaluation of a Taylor-Fourier
// sum and its first/second derivatives (Hamilton fields, angle solves).
class compiled_series {
  public:
    compiled_series() = default;
    explicit compiled_series(const taylor_fourier& f);

    int dim() const { return n_; }

    template <typename S>
    S value(const S* theta, const S* actions) const;

    struct jet {
        // first and second derivatives in (theta, I) blocks
        std::vector<real> d_theta, d_action;            // n each
        std::vector<real> d2_tt, d2_ta, d2_aa;          // n*n each (d2_ta: d/dtheta_row d/dI_col)
    };

    void derivatives(const real* theta, const real* actions, real* value_out, jet* out) const;

  private:
    int n_ = 0;
    int nterms_ = 0;
    std::vector<int> alpha_;  // nterms x n
    std::vector<int> modes_;  // nterms x n
    std::vector<real> c_re_, c_im_;
};

template <typename S>
S compiled_series::value(const S* theta, const S* actions) const {
    S acc = S(0);
    for (int t = 0; t < nterms_; ++t) {
        const int* k = &modes_[t * n_];
        const int* a = &alpha_[t * n_];
        S phase = S(0);
        S mono = S(1);
        for (int j = 0; j < n_; ++j) {
            phase += S(k[j]) * theta[j];
            for (int e = 0; e < a[j]; ++e) mono *= actions[j];
        }
        acc += (S(c_re_[t]) * fp_ops<S>::cos(phase) - S(c_im_[t]) * fp_ops<S>::sin(phase)) * mono;
    }
    return acc;
}

template <typename S>
S bnf_result::eval_h0(const std::vector<S>& actions) const {
    S acc = S(0);
    for (int j = 0; j < dim; ++j) acc += S(omega.omega[j]) * actions[j];
    for (const auto& [m, part] : normal_form) {
        for (const auto& [alpha, series] : part.terms()) {
            S mono = S(1);
            for (int j = 0; j < dim; ++j)
                for (int e = 0; e < alpha[j]; ++e) mono *= actions[j];
            acc += S(fs_mean(series).re) * mono;
        }
    }
    return acc;
}

} // namespace tnf
