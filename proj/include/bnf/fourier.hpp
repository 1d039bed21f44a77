#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bnf/real.hpp"
#include "bnf/util.hpp"

namespace tnf {

// Tunables for series construction and the homological solver.
struct fourier_config {
    real drop_tol = real(1e-30);      // amplitudes below this are not stored
    double mean_zero_rel_tol = 1e-12; // |u_0| <= tol * S_0(f) gate for the solver
    double resonant_floor = 1e-14;    // |<omega,k>| below this aborts the solve
    int qgrid_points = 256;           // per-angle resolution of the Q_p grid estimate
};

const fourier_config& default_fourier_config();

// Finitely supported Fourier series u(theta) = sum_k u_k e^{i<k,theta>}
// on the n-torus.  Modes are kept in a lexicographically ordered map so
// iteration (and hence serialization and truncation) is deterministic.
class fourier_series {
  public:
    using coeff_map = std::map<mode_index, cplx>;

    explicit fourier_series(int dim, bool is_real = true);
    fourier_series(int dim, bool is_real, const coeff_map& coeffs,
                   const fourier_config& cfg = default_fourier_config());

    int dim() const { return dim_; }
    bool is_real() const { return real_; }
    int max_mode() const { return max_mode_; }
    const coeff_map& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }

    cplx coeff(const mode_index& k) const;
    void set_coeff(const mode_index& k, const cplx& c,
                   const fourier_config& cfg = default_fourier_config());

    // Real-part evaluation at an angle (series from real data stay real;
    // the imaginary part is rounding noise and is discarded).
    template <typename S>
    S eval(const std::vector<S>& theta) const;

    static fourier_series constant(int dim, real value);
    // (e^{i<k,theta>} + c.c.)/2 scaled: amp*cos / amp*sin at the given mode.
    static fourier_series cosine(int dim, const mode_index& k, real amp = 1);
    static fourier_series sine(int dim, const mode_index& k, real amp = 1);

  private:
    int dim_;
    bool real_;
    int max_mode_ = 0;
    coeff_map coeffs_;

    void validate(const fourier_config& cfg);
    friend fourier_series fs_raw(int, bool, fourier_series::coeff_map&&, const fourier_config&);
};

// a*u + b*v (complex scalars); the result is flagged real only when both
// inputs are real and the scalars have no imaginary part.
fourier_series fs_linear_combine(const cplx& a, const fourier_series& u,
                                 const cplx& b, const fourier_series& v,
                                 const fourier_config& cfg = default_fourier_config());

// Convolution product.  max_mode < 0 keeps the full support
// (|k| <= u.max_mode + v.max_mode); otherwise modes beyond max_mode are
// dropped and their absolute mass accumulates into *discarded.
fourier_series fs_product(const fourier_series& u, const fourier_series& v,
                          int max_mode = -1, real* discarded = nullptr,
                          const fourier_config& cfg = default_fourier_config());

// d/dtheta_j (axis is 1-based).
fourier_series fs_derivative(const fourier_series& u, int axis,
                             const fourier_config& cfg = default_fourier_config());

// L_omega u = <omega, d/dtheta> u.
fourier_series fs_lomega(const fourier_series& u, const std::vector<real>& omega,
                         const fourier_config& cfg = default_fourier_config());

cplx fs_mean(const fourier_series& u);

// Frequency vector with empirically verified Diophantine data:
// |<omega,k>| >= kappa |k|^{-tau} for all 0 != |k| <= verified_horizon.
struct diophantine_vector {
    std::vector<real> omega;
    real kappa = 1;
    real tau = 1;
    int verified_horizon = 0;

    int dim() const { return (int)omega.size(); }

    // Builds the vector with kappa = min(empirical minimum, 1).
    static diophantine_vector from_empirical(const std::vector<real>& omega, real tau, int horizon);
    // Validates a prescribed kappa against the empirical minimum.
    static diophantine_vector with_kappa(const std::vector<real>& omega, real kappa, real tau,
                                         int horizon);
};

// min over 0 < |k| <= K of |<omega,k>| |k|^tau.  Zero signals an exact
// resonance within the horizon.
real dioph_empirical_kappa(const std::vector<real>& omega, real tau, int K);

enum class norm_kind { wiener_s, modified_p, q_upper, q_grid };

struct norm_value {
    double s = 0;
    real value = 0;
    norm_kind kind = norm_kind::wiener_s;
};

// S_s(u) = sum (1+|k|)^s |u_k|.
norm_value wiener_norm(const fourier_series& u, double s);
// P_s(u) = (s+1)^2 S_s(u).
norm_value modified_norm(const fourier_series& u, double s);

enum class q_mode { upper, grid };

// Q_p(u) = sup_{|a|=p} sup_theta |d^a u|.  upper: the rigorous Fourier
// majorant max_{|a|=p} sum |k^a||u_k|; grid: sampled lower estimate.
norm_value sup_derivative_bound(const fourier_series& u, int p, q_mode mode,
                                const fourier_config& cfg = default_fourier_config());

struct homological_log {
    real min_divisor = 0;      // smallest |<omega,k>| met over the support
    mode_index min_divisor_k;  // the mode attaining it
};

// Solves L_omega u = f with <u> = 0 for mean-zero f: u_k = f_k / (i<omega,k>).
// Throws non_zero_mean when |<f>| exceeds the relative gate and
// resonant_mode when a stored divisor falls below the hard floor.
fourier_series solve_homological(const fourier_series& f, const diophantine_vector& w,
                                 homological_log* log = nullptr,
                                 const fourier_config& cfg = default_fourier_config());

template <typename S>
S fourier_series::eval(const std::vector<S>& theta) const {
    S acc = S(0);
    for (const auto& [k, c] : coeffs_) {
        S phase = S(0);
        for (int j = 0; j < dim_; ++j) phase += S(k[j]) * theta[j];
        acc += S(c.re) * fp_ops<S>::cos(phase) - S(c.im) * fp_ops<S>::sin(phase);
    }
    return acc;
}

} // namespace tnf
