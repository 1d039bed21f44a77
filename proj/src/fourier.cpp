#include "bnf/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace tnf {

const fourier_config& default_fourier_config() {
    static const fourier_config cfg{};
    return cfg;
}

fourier_series::fourier_series(int dim, bool is_real) : dim_(dim), real_(is_real) {
    check_dim(dim, "fourier_series");
}

fourier_series::fourier_series(int dim, bool is_real, const coeff_map& coeffs,
                               const fourier_config& cfg)
    : dim_(dim), real_(is_real), coeffs_(coeffs) {
    check_dim(dim, "fourier_series");
    validate(cfg);
}

void fourier_series::validate(const fourier_config& cfg) {
    max_mode_ = 0;
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if ((int)it->first.size() != dim_)
            fail(errc::dimension_mismatch, "fourier_series: mode index of wrong dimension");
        if (abs(it->second) < cfg.drop_tol) {
            it = coeffs_.erase(it);
            continue;
        }
        max_mode_ = std::max(max_mode_, order_of(it->first));
        ++it;
    }
    if (!real_) return;
    // Hermitian symmetry u_{-k} = conj(u_k), checked against the overall scale.
    real scale = 0;
    for (const auto& [k, c] : coeffs_) scale += abs(c);
    real tol = scale * real(1e-12) + cfg.drop_tol;
    for (const auto& [k, c] : coeffs_) {
        auto it = coeffs_.find(negate(k));
        cplx mirror = it == coeffs_.end() ? cplx{0, 0} : it->second;
        if (abs(mirror - conj(c)) > tol)
            fail(errc::invalid_argument,
                 "fourier_series: series flagged real violates Hermitian symmetry at k=" +
                     index_to_string(k));
    }
}

cplx fourier_series::coeff(const mode_index& k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? cplx{0, 0} : it->second;
}

void fourier_series::set_coeff(const mode_index& k, const cplx& c, const fourier_config& cfg) {
    if ((int)k.size() != dim_) fail(errc::dimension_mismatch, "set_coeff: wrong index dimension");
    if (abs(c) < cfg.drop_tol) {
        coeffs_.erase(k);
        return;
    }
    coeffs_[k] = c;
    max_mode_ = std::max(max_mode_, order_of(k));
}

fourier_series fourier_series::constant(int dim, real value) {
    fourier_series u(dim, true);
    u.set_coeff(mode_index(dim, 0), cplx(value, 0));
    return u;
}

fourier_series fourier_series::cosine(int dim, const mode_index& k, real amp) {
    fourier_series u(dim, true);
    u.set_coeff(k, cplx(amp / 2, 0));
    u.set_coeff(negate(k), cplx(amp / 2, 0));
    return u;
}

fourier_series fourier_series::sine(int dim, const mode_index& k, real amp) {
    fourier_series u(dim, true);
    u.set_coeff(k, cplx(0, -amp / 2));
    u.set_coeff(negate(k), cplx(0, amp / 2));
    return u;
}

// Internal constructor bypassing the Hermitian re-check for maps built by
// operations that preserve symmetry structurally.
fourier_series fs_raw(int dim, bool is_real, fourier_series::coeff_map&& coeffs,
                      const fourier_config& cfg) {
    fourier_series u(dim, is_real);
    for (auto& [k, c] : coeffs) {
        if (abs(c) < cfg.drop_tol) continue;
        u.coeffs_[k] = c;
        u.max_mode_ = std::max(u.max_mode_, order_of(k));
    }
    return u;
}

fourier_series fs_linear_combine(const cplx& a, const fourier_series& u,
                                 const cplx& b, const fourier_series& v,
                                 const fourier_config& cfg) {
    if (u.dim() != v.dim()) fail(errc::dimension_mismatch, "fs_linear_combine: dim mismatch");
    fourier_series::coeff_map out;
    for (const auto& [k, c] : u.coeffs()) out[k] += a * c;
    for (const auto& [k, c] : v.coeffs()) out[k] += b * c;
    bool is_real = u.is_real() && v.is_real() && a.im == real(0) && b.im == real(0);
    return fs_raw(u.dim(), is_real, std::move(out), cfg);
}

fourier_series fs_product(const fourier_series& u, const fourier_series& v,
                          int max_mode, real* discarded, const fourier_config& cfg) {
    if (u.dim() != v.dim()) fail(errc::dimension_mismatch, "fs_product: dim mismatch");
    const int n = u.dim();
    fourier_series::coeff_map out;
    mode_index k(n);
    for (const auto& [ku, cu] : u.coeffs())
        for (const auto& [kv, cv] : v.coeffs()) {
            for (int j = 0; j < n; ++j) k[j] = ku[j] + kv[j];
            out[k] += cu * cv;
        }
    if (max_mode >= 0) {
        for (auto it = out.begin(); it != out.end();) {
            if (order_of(it->first) > max_mode) {
                if (discarded) *discarded += abs(it->second);
                it = out.erase(it);
            } else {
                ++it;
            }
        }
    }
    return fs_raw(n, u.is_real() && v.is_real(), std::move(out), cfg);
}

fourier_series fs_derivative(const fourier_series& u, int axis, const fourier_config& cfg) {
    if (axis < 1 || axis > u.dim()) fail(errc::axis_range, "fs_derivative: axis out of range");
    fourier_series::coeff_map out;
    for (const auto& [k, c] : u.coeffs()) {
        real kj = real(k[axis - 1]);
        if (kj == real(0)) continue;
        out[k] = cplx(-kj * c.im, kj * c.re); // i * k_j * c
    }
    return fs_raw(u.dim(), u.is_real(), std::move(out), cfg);
}

fourier_series fs_lomega(const fourier_series& u, const std::vector<real>& omega,
                         const fourier_config& cfg) {
    if ((int)omega.size() != u.dim()) fail(errc::dimension_mismatch, "fs_lomega: dim mismatch");
    fourier_series::coeff_map out;
    for (const auto& [k, c] : u.coeffs()) {
        real d = 0;
        for (int j = 0; j < u.dim(); ++j) d += omega[j] * real(k[j]);
        if (d == real(0)) continue;
        out[k] = cplx(-d * c.im, d * c.re);
    }
    return fs_raw(u.dim(), u.is_real(), std::move(out), cfg);
}

cplx fs_mean(const fourier_series& u) { return u.coeff(mode_index(u.dim(), 0)); }

real dioph_empirical_kappa(const std::vector<real>& omega, real tau, int K) {
    const int n = (int)omega.size();
    check_dim(n, "dioph_empirical_kappa");
    if (K < 1) fail(errc::invalid_argument, "dioph_empirical_kappa: horizon must be >= 1");
    // the scan itself is defined for any positive exponent; the strict
    // tau > n-1 requirement is enforced where the theory needs it
    // (diophantine_vector construction and problem ingestion)
    if (!(double(tau) > 0))
        fail(errc::invalid_argument, "dioph_empirical_kappa: need tau > 0");
    real best = -1;
    mode_index k(n, 0);
    // Enumerates |k| <= K; +k and -k give the same value, so fix the first
    // nonzero component positive.
    std::function<void(int, int)> rec = [&](int axis, int budget) {
        if (axis == n) {
            int ord = order_of(k);
            if (ord == 0) return;
            real dot = 0;
            for (int j = 0; j < n; ++j) dot += omega[j] * real(k[j]);
            real val = r_abs(dot) * r_pow(real(ord), tau);
            if (best < real(0) || val < best) best = val;
            return;
        }
        bool leading_zero = true;
        for (int j = 0; j < axis; ++j)
            if (k[j] != 0) leading_zero = false;
        int lo = leading_zero ? 0 : -budget;
        for (int v = lo; v <= budget; ++v) {
            k[axis] = v;
            rec(axis + 1, budget - (v < 0 ? -v : v));
        }
        k[axis] = 0;
    };
    rec(0, K);
    return best < real(0) ? real(0) : best;
}

namespace {
void check_tau(const std::vector<real>& omega, real tau) {
    if (!(double(tau) > (int)omega.size() - 1))
        fail(errc::schema, "diophantine_vector: need tau > n - 1");
}
} // namespace

diophantine_vector diophantine_vector::from_empirical(const std::vector<real>& omega, real tau,
                                                      int horizon) {
    check_tau(omega, tau);
    diophantine_vector w;
    w.omega = omega;
    w.tau = tau;
    w.verified_horizon = horizon;
    real k = dioph_empirical_kappa(omega, tau, horizon);
    w.kappa = k < real(1) ? k : real(1);
    return w;
}

diophantine_vector diophantine_vector::with_kappa(const std::vector<real>& omega, real kappa,
                                                  real tau, int horizon) {
    check_tau(omega, tau);
    if (!(kappa > real(0)) || kappa > real(1))
        fail(errc::schema, "diophantine_vector: kappa must lie in (0, 1]");
    real emp = dioph_empirical_kappa(omega, tau, horizon);
    if (kappa > emp)
        fail(errc::schema,
             "diophantine_vector: prescribed kappa exceeds the empirical minimum within the "
             "verified horizon");
    diophantine_vector w;
    w.omega = omega;
    w.kappa = kappa;
    w.tau = tau;
    w.verified_horizon = horizon;
    return w;
}

norm_value wiener_norm(const fourier_series& u, double s) {
    if (s < 0) fail(errc::invalid_argument, "wiener_norm: s must be nonnegative");
    real acc = 0;
    for (const auto& [k, c] : u.coeffs())
        acc += r_pow(real(1 + order_of(k)), real(s)) * abs(c);
    return {s, acc, norm_kind::wiener_s};
}

norm_value modified_norm(const fourier_series& u, double s) {
    norm_value v = wiener_norm(u, s);
    v.value *= real((s + 1) * (s + 1));
    v.kind = norm_kind::modified_p;
    return v;
}

norm_value sup_derivative_bound(const fourier_series& u, int p, q_mode mode,
                                const fourier_config& cfg) {
    if (p < 0) fail(errc::invalid_argument, "sup_derivative_bound: p must be nonnegative");
    const int n = u.dim();
    auto alphas = multi_indices_of_degree(n, p);
    real best = 0;
    if (mode == q_mode::upper) {
        for (const auto& a : alphas) {
            real acc = 0;
            for (const auto& [k, c] : u.coeffs()) {
                real w = 1;
                for (int j = 0; j < n; ++j)
                    for (int t = 0; t < a[j]; ++t) w *= real(k[j] < 0 ? -k[j] : k[j]);
                acc += w * abs(c);
            }
            best = std::max(best, acc);
        }
        return {double(p), best, norm_kind::q_upper};
    }
    // Grid estimate: evaluate |d^a u| on a uniform grid for each |a| = p.
    const int g = cfg.qgrid_points;
    const double step = 2.0 * M_PI / g;
    std::vector<int> idx(n, 0);
    std::vector<double> theta(n);
    for (const auto& a : alphas) {
        // coefficients of d^a u: (ik)^a u_k
        std::vector<std::pair<mode_index, cplx>> terms;
        terms.reserve(u.coeffs().size());
        for (const auto& [k, c] : u.coeffs()) {
            cplx v = c;
            for (int j = 0; j < n; ++j)
                for (int t = 0; t < a[j]; ++t) v = cplx(-real(k[j]) * v.im, real(k[j]) * v.re);
            terms.emplace_back(k, v);
        }
        std::fill(idx.begin(), idx.end(), 0);
        for (;;) {
            for (int j = 0; j < n; ++j) theta[j] = idx[j] * step;
            cplx acc{0, 0};
            for (const auto& [k, v] : terms) {
                double phase = 0;
                for (int j = 0; j < n; ++j) phase += k[j] * theta[j];
                cplx e(real(std::cos(phase)), real(std::sin(phase)));
                acc += v * e;
            }
            best = std::max(best, abs(acc));
            int axis = 0;
            while (axis < n && ++idx[axis] == g) idx[axis++] = 0;
            if (axis == n) break;
        }
    }
    return {double(p), best, norm_kind::q_grid};
}

fourier_series solve_homological(const fourier_series& f, const diophantine_vector& w,
                                 homological_log* log, const fourier_config& cfg) {
    if (f.dim() != w.dim()) fail(errc::dimension_mismatch, "solve_homological: dim mismatch");
    real s0 = wiener_norm(f, 0).value;
    real mean = abs(fs_mean(f));
    if (mean > real(cfg.mean_zero_rel_tol) * s0)
        fail(errc::non_zero_mean,
             "solve_homological: input has non-vanishing mean (subtract R_m first)");
    fourier_series::coeff_map out;
    real min_div = -1;
    mode_index min_k;
    for (const auto& [k, c] : f.coeffs()) {
        if (order_of(k) == 0) continue; // mean already checked against the gate
        real d = 0;
        for (int j = 0; j < f.dim(); ++j) d += w.omega[j] * real(k[j]);
        real ad = r_abs(d);
        if (ad < real(cfg.resonant_floor))
            fail(errc::resonant_mode,
                 "solve_homological: divisor below hard floor at k=" + index_to_string(k));
        if (min_div < real(0) || ad < min_div) {
            min_div = ad;
            min_k = k;
        }
        out[k] = div_by_imag(c, d);
    }
    if (log) {
        log->min_divisor = min_div < real(0) ? real(0) : min_div;
        log->min_divisor_k = min_k;
    }
    return fs_raw(f.dim(), f.is_real(), std::move(out), cfg);
}

} // namespace tnf
