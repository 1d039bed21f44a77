#pragma once

#include "bnf/engine.hpp"

namespace tnf {

struct flow_state {
    std::vector<real> theta; // wrapped to [0, 2*pi)
    std::vector<real> r;
    real t = 0;
};

struct integrator_config {
    real dt = real(1e-2);
    double newton_tol = 1e-12;
    int max_newton_iters = 25;
    int sample_stride = 1000; // trajectory rows kept every this many steps
};

// Hamilton field of H = <omega, r> + H~(theta, r) with exact derivatives
// of the Taylor-Fourier data.
class flow_system {
  public:
    explicit flow_system(const hamiltonian_spec& spec);

    int dim() const { return n_; }
    real domain_radius() const { return domain_radius_; }

    // dtheta = omega + dH~/dr, dr = -dH~/dtheta; throws when |r| leaves
    // the declared domain.
    void field(const flow_state& s, std::vector<real>& dtheta, std::vector<real>& dr) const;

    real energy(const flow_state& s) const;

    // One implicit-midpoint step (Newton); returns iterations used.
    int step(flow_state& s, const integrator_config& cfg) const;

  private:
    int n_;
    std::vector<real> omega_;
    compiled_series htilde_;
    real domain_radius_;

    void raw_field(const real* theta, const real* r, real* dth, real* dr,
                   compiled_series::jet* jet) const;
    friend struct midpoint_stepper;
};

struct trajectory_sample {
    real t = 0;
    std::vector<real> theta, r;
    real energy = 0;
    real action_dev = 0; // |r - r0|_2
};

struct trajectory_summary {
    flow_state final_state;
    std::size_t steps = 0;
    real energy0 = 0;
    real max_action_dev = 0;       // max |r(t) - r(0)|_2
    real max_energy_rel_dev = 0;   // max |H - H0| / |H0| over all steps
    real energy_secular_drift = 0; // |linear-fit slope| * T / |H0|
    std::vector<trajectory_sample> samples;
    bool escaped = false; // only meaningful for escape runs
    real escape_time = 0;
};

// Integrates to horizon T; keep_samples controls whether CSV rows are kept.
trajectory_summary integrate(const flow_system& sys, const flow_state& start, real horizon,
                             const integrator_config& cfg, bool keep_samples = false);

// First time |r(t)|_2 >= band_factor * |r0|_2, else runs to the cap.
// Start point: theta = 0, r = r0_norm * (1,...,1)/sqrt(n).
trajectory_summary escape_time(const flow_system& sys, real r0_norm, real band_factor,
                               real t_cap, const integrator_config& cfg,
                               bool keep_samples = false);

} // namespace tnf
