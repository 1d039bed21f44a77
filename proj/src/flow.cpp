#include "bnf/flow.hpp"

#include <algorithm>
#include <cmath>

namespace tnf {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

real wrap_2pi(real x) {
    real w = r_fmod(x, real(kTwoPi));
    if (w < real(0)) w += real(kTwoPi);
    return w;
}
} // namespace

flow_system::flow_system(const hamiltonian_spec& spec)
    : n_(spec.dim()), omega_(spec.omega().omega), htilde_(spec.coeffs()),
      domain_radius_(spec.domain_radius()) {}

void flow_system::raw_field(const real* theta, const real* r, real* dth, real* dr,
                            compiled_series::jet* jet) const {
    compiled_series::jet local;
    compiled_series::jet* j = jet ? jet : &local;
    htilde_.derivatives(theta, r, nullptr, j);
    for (int i = 0; i < n_; ++i) {
        dth[i] = omega_[i] + j->d_action[i];
        dr[i] = -j->d_theta[i];
    }
}

void flow_system::field(const flow_state& s, std::vector<real>& dtheta,
                        std::vector<real>& dr) const {
    real norm2 = 0;
    for (real v : s.r) norm2 += v * v;
    if (r_sqrt(norm2) > domain_radius_ * real(1 + 1e-9))
        fail(errc::invalid_argument, "flow: |r| exceeded the declared domain radius");
    dtheta.assign(n_, 0);
    dr.assign(n_, 0);
    raw_field(s.theta.data(), s.r.data(), dtheta.data(), dr.data(), nullptr);
}

real flow_system::energy(const flow_state& s) const {
    real h = 0;
    for (int i = 0; i < n_; ++i) h += omega_[i] * s.r[i];
    return h + htilde_.value(s.theta.data(), s.r.data());
}

int flow_system::step(flow_state& s, const integrator_config& cfg) const {
    const int n = n_;
    const int d = 2 * n;
    const real h = cfg.dt;
    // z = (theta, r); unknown w solves w = z + h f((z + w)/2)
    std::vector<real> z(d), w(d), mid_th(n), mid_r(n), fth(n), fr(n);
    for (int i = 0; i < n; ++i) {
        z[i] = s.theta[i];
        z[n + i] = s.r[i];
    }
    // explicit Euler predictor
    raw_field(&z[0], &z[n], fth.data(), fr.data(), nullptr);
    for (int i = 0; i < n; ++i) {
        w[i] = z[i] + h * fth[i];
        w[n + i] = z[n + i] + h * fr[i];
    }
    real scale = 1;
    for (int i = 0; i < d; ++i) scale = std::max(scale, r_abs(z[i]));
    const real tol = real(cfg.newton_tol) * scale;

    compiled_series::jet jet;
    std::vector<real> jac(d * d), rhs(d);
    int it = 0;
    for (; it < cfg.max_newton_iters; ++it) {
        for (int i = 0; i < n; ++i) {
            mid_th[i] = (z[i] + w[i]) / 2;
            mid_r[i] = (z[n + i] + w[n + i]) / 2;
        }
        raw_field(mid_th.data(), mid_r.data(), fth.data(), fr.data(), &jet);
        real worst = 0;
        for (int i = 0; i < n; ++i) {
            rhs[i] = w[i] - z[i] - h * fth[i];
            rhs[n + i] = w[n + i] - z[n + i] - h * fr[i];
        }
        for (int i = 0; i < d; ++i) worst = std::max(worst, r_abs(rhs[i]));
        if (worst <= tol) break;
        // J = I - (h/2) Df(mid);  Df blocks from the Hessian of H~:
        //   d(dtheta_i)/dtheta_l = H_{r_i theta_l},  d(dtheta_i)/dr_l = H_{r_i r_l}
        //   d(dr_i)/dtheta_l     = -H_{theta_i theta_l},  d(dr_i)/dr_l = -H_{theta_i r_l}
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                real df_tt = jet.d2_ta[l * n + i];  // d theta_l d I_i
                real df_tr = jet.d2_aa[i * n + l];
                real df_rt = -jet.d2_tt[i * n + l];
                real df_rr = -jet.d2_ta[i * n + l];
                jac[i * d + l] = (i == l ? real(1) : real(0)) - h / 2 * df_tt;
                jac[i * d + (n + l)] = -h / 2 * df_tr;
                jac[(n + i) * d + l] = -h / 2 * df_rt;
                jac[(n + i) * d + (n + l)] = (i == l ? real(1) : real(0)) - h / 2 * df_rr;
            }
        solve_dense(jac, rhs, d);
        for (int i = 0; i < d; ++i) w[i] -= rhs[i];
    }
    if (it == cfg.max_newton_iters)
        fail(errc::no_convergence, "implicit midpoint: Newton did not converge");
    for (int i = 0; i < n; ++i) {
        s.theta[i] = wrap_2pi(w[i]);
        s.r[i] = w[n + i];
    }
    s.t += h;
    return it + 1;
}

namespace {

trajectory_summary run(const flow_system& sys, const flow_state& start, real horizon,
                       const integrator_config& cfg, bool keep_samples, real band_limit) {
    const int n = sys.dim();
    trajectory_summary out;
    flow_state s = start;
    for (int i = 0; i < n; ++i) s.theta[i] = wrap_2pi(s.theta[i]);
    out.energy0 = sys.energy(s);
    const real h0_abs = std::max(r_abs(out.energy0), real(1e-300));

    // accumulators for the secular least-squares fit of H(t)
    double lsq_n = 0, lsq_st = 0, lsq_se = 0, lsq_stt = 0, lsq_ste = 0;

    const std::size_t steps = (std::size_t)double(r_floor(horizon / cfg.dt + real(0.5)));
    auto record = [&](const flow_state& state, real dev) {
        trajectory_sample sample;
        sample.t = state.t;
        sample.theta = state.theta;
        sample.r = state.r;
        sample.energy = sys.energy(state);
        sample.action_dev = dev;
        out.samples.push_back(std::move(sample));
    };

    // blowup guard: escape probes may legitimately leave the normal-form
    // chart, but a runaway trajectory should abort rather than spin
    const real guard = real(10) * std::max(sys.domain_radius(),
                                           band_limit > real(0) ? band_limit : real(0));
    real last_dev = 0;
    if (keep_samples) record(s, last_dev);
    for (std::size_t k = 0; k < steps; ++k) {
        sys.step(s, cfg);
        ++out.steps;
        real dev2 = 0, rnorm2 = 0;
        for (int i = 0; i < n; ++i) {
            real d = s.r[i] - start.r[i];
            dev2 += d * d;
            rnorm2 += s.r[i] * s.r[i];
        }
        last_dev = r_sqrt(dev2);
        out.max_action_dev = std::max(out.max_action_dev, last_dev);
        real e = sys.energy(s);
        out.max_energy_rel_dev = std::max(out.max_energy_rel_dev, r_abs(e - out.energy0) / h0_abs);
        {
            double t = double(s.t), de = double(e - out.energy0);
            lsq_n += 1;
            lsq_st += t;
            lsq_se += de;
            lsq_stt += t * t;
            lsq_ste += t * de;
        }
        if (keep_samples && (out.steps % (std::size_t)cfg.sample_stride == 0)) record(s, last_dev);
        if (band_limit > real(0) && r_sqrt(rnorm2) >= band_limit) {
            out.escaped = true;
            out.escape_time = s.t;
            break;
        }
        if (!r_finite(r_sqrt(rnorm2)) || r_sqrt(rnorm2) > guard)
            fail(errc::no_convergence, "flow: trajectory left the guarded region");
    }
    if (keep_samples && (!out.samples.empty() && out.samples.back().t != s.t)) record(s, last_dev);
    out.final_state = s;
    if (lsq_n >= 2) {
        double denom = lsq_n * lsq_stt - lsq_st * lsq_st;
        if (denom > 0) {
            double slope = (lsq_n * lsq_ste - lsq_st * lsq_se) / denom;
            out.energy_secular_drift = r_abs(real(slope) * horizon) / h0_abs;
        }
    }
    return out;
}

} // namespace

trajectory_summary integrate(const flow_system& sys, const flow_state& start, real horizon,
                             const integrator_config& cfg, bool keep_samples) {
    if (!(horizon > real(0))) fail(errc::invalid_argument, "integrate: horizon must be positive");
    return run(sys, start, horizon, cfg, keep_samples, real(-1));
}

trajectory_summary escape_time(const flow_system& sys, real r0_norm, real band_factor,
                               real t_cap, const integrator_config& cfg, bool keep_samples) {
    if (!(band_factor > real(1)))
        fail(errc::invalid_argument, "escape_time: band_factor must exceed 1");
    if (!(t_cap > real(0))) fail(errc::invalid_argument, "escape_time: cap must be positive");
    const int n = sys.dim();
    flow_state s;
    s.theta.assign(n, 0);
    s.r.assign(n, r0_norm / r_sqrt(real(n)));
    s.t = 0;
    return run(sys, s, t_cap, cfg, keep_samples, band_factor * r0_norm);
}

} // namespace tnf
