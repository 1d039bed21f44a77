#include "bnf/engine.hpp"

#include <algorithm>

namespace tnf {

hamiltonian_spec::hamiltonian_spec(diophantine_vector omega, taylor_fourier coeffs,
                                   real domain_radius, gevrey_params gevrey)
    : omega_(std::move(omega)), coeffs_(std::move(coeffs)), domain_radius_(domain_radius),
      gevrey_(std::move(gevrey)) {
    if (omega_.dim() != coeffs_.dim())
        fail(errc::dimension_mismatch, "hamiltonian_spec: omega/coeffs dimension mismatch");
    if (coeffs_.m_min() < 2)
        fail(errc::schema, "hamiltonian_spec: coefficients must start at degree 2 "
                           "(H(theta,0)=0 and the linear part is exactly <omega,r>)");
    if (!(domain_radius_ > real(0)))
        fail(errc::schema, "hamiltonian_spec: domain_radius must be positive");
    k_input_ = 1;
    for (const auto& [m, part] : coeffs_.parts())
        for (const auto& [alpha, series] : part.terms()) {
            if (!series.is_real())
                fail(errc::schema, "hamiltonian_spec: coefficient series must be real");
            k_input_ = std::max(k_input_, series.max_mode());
        }
}

real bnf_result::normal_form_coeff(int m, const multi_index& alpha) const {
    auto it = normal_form.find(m);
    if (it == normal_form.end()) return 0;
    const fourier_series* s = it->second.term(alpha);
    return s ? fs_mean(*s).re : real(0);
}

homogeneous_part assemble_bm(const hamiltonian_spec& spec, const taylor_fourier& g_lower, int m,
                             const engine_options& opts, real* discarded) {
    if (m < 2) fail(errc::invalid_argument, "assemble_bm: m >= 2 required");
    const int n = spec.dim();
    // zero parts are indistinguishable from absent ones in a sparse
    // container, so completeness is a window condition
    if (m > 2 && g_lower.m_max() < m - 1)
        fail(errc::invalid_argument,
             "assemble_bm: generating grades through m-1 required (window ends at " +
                 std::to_string(g_lower.m_max()) + ")");

    const int cap_per_grade = std::min(spec.k_input(), opts.kmax_per_order);
    const int cap_m = cap_per_grade * m;

    auto axes = power_expander::grades_from_generating(g_lower, m - 1, opts.fourier);
    power_expander expander(n, std::move(axes), cap_per_grade, opts.fourier);

    homogeneous_part bm(n, m);
    real dropped = 0;
    for (const auto& [deg, part] : spec.coeffs().parts()) {
        if (deg < 2 || deg > m) continue; // b_alpha with |alpha| > m cannot reach degree m
        for (const auto& [alpha, b_series] : part.terms()) {
            homogeneous_part a = expander.expand(alpha, m);
            for (const auto& [gamma, series] : a.terms())
                bm.add_term(gamma, fs_product(b_series, series, cap_m, &dropped, opts.fourier),
                            opts.fourier);
        }
    }
    dropped += expander.discarded_mass();
    if (discarded) *discarded += dropped;
    return bm;
}

bnf_step_output bnf_step(const hamiltonian_spec& spec, const taylor_fourier& g_lower, int m,
                         const engine_options& opts) {
    const int n = spec.dim();
    real dropped = 0;
    homogeneous_part bm = assemble_bm(spec, g_lower, m, opts, &dropped);

    homogeneous_part rm(n, m);
    homogeneous_part gm(n, m);
    order_log log;
    log.m = m;
    log.discarded_mass = dropped;
    real min_div = -1;

    // Deterministic ordering: collect keys first; per-alpha solves are
    // independent and filled into slots.
    std::vector<const multi_index*> keys;
    std::vector<const fourier_series*> values;
    for (const auto& [alpha, series] : bm.terms()) {
        keys.push_back(&alpha);
        values.push_back(&series);
    }
    std::vector<fourier_series> solved(keys.size(), fourier_series(n));
    std::vector<real> means(keys.size(), real(0));
    std::vector<real> divisors(keys.size(), real(-1));
    std::vector<real> residuals(keys.size(), real(0));

    parallel_for(keys.size(), [&](std::size_t i) {
        const fourier_series& series = *values[i];
        cplx mean = fs_mean(series);
        means[i] = mean.re;
        fourier_series rhs = fs_linear_combine(
            cplx(-1), series, cplx(1), fourier_series::constant(n, mean.re), opts.fourier);
        homological_log hlog;
        solved[i] = solve_homological(rhs, spec.omega(), &hlog, opts.fourier);
        divisors[i] = hlog.min_divisor;
        // residual of L_w g + B - R = L_w g - rhs, relative to S0(B)
        fourier_series lg = fs_lomega(solved[i], spec.omega().omega, opts.fourier);
        fourier_series res = fs_linear_combine(cplx(1), lg, cplx(-1), rhs, opts.fourier);
        real s0b = wiener_norm(series, 0).value;
        residuals[i] = s0b > real(0) ? wiener_norm(res, 0).value / s0b : real(0);
    });

    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (means[i] != real(0))
            rm.set_term(*keys[i], fourier_series::constant(n, means[i]));
        if (!solved[i].empty()) gm.set_term(*keys[i], solved[i]);
        if (divisors[i] >= real(0) && (min_div < real(0) || divisors[i] < min_div))
            min_div = divisors[i];
        log.max_residual = std::max(log.max_residual, residuals[i]);
    }
    log.min_divisor = min_div < real(0) ? real(0) : min_div;
    return {std::move(bm), std::move(gm), std::move(rm), log};
}

bnf_result bnf_run(const hamiltonian_spec& spec, int order, const engine_options& opts) {
    if (order < 2) fail(errc::invalid_argument, "bnf_run: order >= 2 required");
    bnf_result out;
    out.dim = spec.dim();
    out.order = order;
    out.omega = spec.omega();
    out.gevrey = spec.gevrey();
    out.domain_radius = spec.domain_radius();
    out.g = taylor_fourier(spec.dim(), 2, order);
    bool retain_b = opts.retain_b < 0 ? order <= 8 : opts.retain_b > 0;
    if (retain_b) out.b_parts.emplace();

    for (int m = 2; m <= order; ++m) {
        try {
            bnf_step_output step = bnf_step(spec, out.g, m, opts);
            if (!step.g_m.empty()) out.g.set_part(step.g_m);
            out.normal_form.emplace(m, std::move(step.r_m));
            if (retain_b) out.b_parts->emplace(m, std::move(step.b_m));
            out.logs.push_back(step.log);
        } catch (const error& e) {
            if (e.code() == errc::resonant_mode) {
                out.resonant_abort = true;
                out.error_message = e.what();
                out.order = m - 1;
                return out;
            }
            throw;
        }
    }
    return out;
}

compiled_series::compiled_series(const taylor_fourier& f) : n_(f.dim()) {
    for (const auto& [m, part] : f.parts())
        for (const auto& [alpha, series] : part.terms())
            for (const auto& [k, c] : series.coeffs()) {
                alpha_.insert(alpha_.end(), alpha.begin(), alpha.end());
                modes_.insert(modes_.end(), k.begin(), k.end());
                c_re_.push_back(c.re);
                c_im_.push_back(c.im);
                ++nterms_;
            }
}

namespace {

// monomial I^alpha and its first/second action derivatives
real mono_value(const real* I, const int* a, int n) {
    real v = 1;
    for (int j = 0; j < n; ++j)
        for (int e = 0; e < a[j]; ++e) v *= I[j];
    return v;
}

real mono_d(const real* I, const int* a, int n, int axis) {
    if (a[axis] == 0) return 0;
    real v = real(a[axis]);
    for (int j = 0; j < n; ++j) {
        int e = a[j] - (j == axis ? 1 : 0);
        for (int t = 0; t < e; ++t) v *= I[j];
    }
    return v;
}

real mono_dd(const real* I, const int* a, int n, int ax1, int ax2) {
    int mult;
    if (ax1 == ax2) {
        if (a[ax1] < 2) return 0;
        mult = a[ax1] * (a[ax1] - 1);
    } else {
        if (a[ax1] == 0 || a[ax2] == 0) return 0;
        mult = a[ax1] * a[ax2];
    }
    real v = real(mult);
    for (int j = 0; j < n; ++j) {
        int e = a[j] - (j == ax1 ? 1 : 0) - (j == ax2 ? 1 : 0);
        for (int t = 0; t < e; ++t) v *= I[j];
    }
    return v;
}

} // namespace

void compiled_series::derivatives(const real* theta, const real* actions, real* value_out,
                                  jet* out) const {
    if (out) {
        out->d_theta.assign(n_, 0);
        out->d_action.assign(n_, 0);
        out->d2_tt.assign(n_ * n_, 0);
        out->d2_ta.assign(n_ * n_, 0);
        out->d2_aa.assign(n_ * n_, 0);
    }
    real value = 0;
    for (int t = 0; t < nterms_; ++t) {
        const int* k = &modes_[t * n_];
        const int* a = &alpha_[t * n_];
        real phase = 0;
        for (int j = 0; j < n_; ++j) phase += real(k[j]) * theta[j];
        real cp = r_cos(phase), sp = r_sin(phase);
        real re_part = c_re_[t] * cp - c_im_[t] * sp;  // Re(c e^{i phase})
        real im_part = c_re_[t] * sp + c_im_[t] * cp;  // Im(c e^{i phase})
        real mono = mono_value(actions, a, n_);
        value += re_part * mono;
        if (!out) continue;
        for (int j = 0; j < n_; ++j) {
            real dmj = mono_d(actions, a, n_, j);
            out->d_theta[j] += -real(k[j]) * im_part * mono;
            out->d_action[j] += re_part * dmj;
            for (int l = 0; l < n_; ++l) {
                out->d2_tt[j * n_ + l] += -real(k[j]) * real(k[l]) * re_part * mono;
                out->d2_ta[j * n_ + l] += -real(k[j]) * im_part * mono_d(actions, a, n_, l);
                out->d2_aa[j * n_ + l] += re_part * mono_dd(actions, a, n_, j, l);
            }
        }
    }
    if (value_out) *value_out = value;
}

} // namespace tnf
