#pragma once

#include "bnf/engine.hpp"

namespace tnf {

struct angle_solver_options {
    int max_iters = 60;
    double residual_tol = 1e-12;      // per component, wrap-aware
    double contraction_switch = 0.5;  // fall back to Newton above this rate
    double damping = 1.0;
};

// Canonical transformation generated by g(theta, I):
//   graph chi = { (theta, I + dg/dtheta; theta + dg/dI, I) }.
// g has m_min >= 2, so the map fixes the zero section.
class canonical_map {
  public:
    canonical_map(taylor_fourier g, real domain_radius, angle_solver_options solver = {});
    // domain radius from the dyadic contraction scan
    explicit canonical_map(taylor_fourier g, angle_solver_options solver = {});

    int dim() const { return g_.dim(); }
    const taylor_fourier& generating() const { return g_; }
    real domain_radius() const { return domain_radius_; }
    const angle_solver_options& solver() const { return solver_; }

    // theta solving phi = theta + grad_I g(theta, I); throws no_convergence
    // when the iteration fails (domain_radius too large for this I).
    std::vector<real> solve_angle(const std::vector<real>& phi, const std::vector<real>& actions) const;

    // (x, y) = (solve_angle(phi, I), I + grad_theta g(x, I))
    void apply(const std::vector<real>& phi, const std::vector<real>& actions,
               std::vector<real>& x_out, std::vector<real>& y_out) const;

    // reverse: given (x, y) recover (phi, I) with I = y - grad_theta g(x, I)
    void invert(const std::vector<real>& x, const std::vector<real>& y,
                std::vector<real>& phi_out, std::vector<real>& actions_out) const;

    // grad_theta g evaluated in scalar S (used by the flatness scan, which
    // accumulates in extended precision to keep cancellation noise below
    // the O(|I|^{M+1}) residuals it measures)
    template <typename S>
    void grad_theta(const std::vector<S>& theta, const std::vector<S>& actions,
                    std::vector<S>& out) const;

    // largest radius in a dyadic scan with contraction estimate < 0.9
    static real estimate_domain_radius(const taylor_fourier& g, real start_radius = 1);

  private:
    taylor_fourier g_;
    real domain_radius_;
    angle_solver_options solver_;
    compiled_series cg_;
};

struct flatness_row {
    double radius = 0;
    double sup_residual = 0;
};

struct flatness_report {
    std::vector<flatness_row> rows;
    bool slope_fitted = false; // false when residuals sit at rounding level
    double slope = 0;
};

// For each radius r: sup over `samples` random (phi, I), |I|_2 = r, of
// |H(chi(phi, I)) - H0(I)|, then the log-log slope across radii.
flatness_report flatness_scan(const hamiltonian_spec& spec, const bnf_result& result,
                              const std::vector<double>& radii, int samples, unsigned seed,
                              const angle_solver_options& solver = {});

// max-norm defect of J^T Omega J - Omega for the finite-difference
// Jacobian of the map at (phi, I), step h.
double symplecticity_defect(const canonical_map& map, const std::vector<real>& phi,
                            const std::vector<real>& actions, double h = 1e-6);

template <typename S>
void canonical_map::grad_theta(const std::vector<S>& theta, const std::vector<S>& actions,
                               std::vector<S>& out) const {
    const int n = dim();
    out.assign(n, S(0));
    for (const auto& [m, part] : g_.parts())
        for (const auto& [alpha, series] : part.terms()) {
            S mono = S(1);
            for (int j = 0; j < n; ++j)
                for (int e = 0; e < alpha[j]; ++e) mono *= actions[j];
            for (const auto& [k, c] : series.coeffs()) {
                S phase = S(0);
                for (int j = 0; j < n; ++j) phase += S(k[j]) * theta[j];
                // d/dtheta_j Re(c e^{i phase}) = -k_j Im(c e^{i phase})
                S im = S(c.re) * fp_ops<S>::sin(phase) + S(c.im) * fp_ops<S>::cos(phase);
                for (int j = 0; j < n; ++j)
                    if (k[j] != 0) out[j] -= S(k[j]) * im * mono;
            }
        }
}

} // namespace tnf
