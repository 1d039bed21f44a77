#include "bnf/canonical.hpp"

#include <algorithm>
#include <cmath>

namespace tnf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

real wrap_pi(real x) {
    // wrap to [-pi, pi)
    real w = r_fmod(x, real(kTwoPi));
    if (w >= real(kTwoPi / 2)) w -= real(kTwoPi);
    if (w < real(-kTwoPi / 2)) w += real(kTwoPi);
    return w;
}

} // namespace

canonical_map::canonical_map(taylor_fourier g, real domain_radius, angle_solver_options solver)
    : g_(std::move(g)), domain_radius_(domain_radius), solver_(solver), cg_(g_) {
    if (g_.m_min() < 2)
        fail(errc::invalid_argument,
             "canonical_map: generating function must be O(|I|^2) (m_min >= 2)");
    if (!(domain_radius_ > real(0)))
        fail(errc::invalid_argument, "canonical_map: domain_radius must be positive");
}

canonical_map::canonical_map(taylor_fourier g, angle_solver_options solver)
    : canonical_map(g, estimate_domain_radius(g), solver) {}

std::vector<real> canonical_map::solve_angle(const std::vector<real>& phi,
                                             const std::vector<real>& actions) const {
    const int n = dim();
    if ((int)phi.size() != n || (int)actions.size() != n)
        fail(errc::dimension_mismatch, "solve_angle: wrong vector sizes");
    real rnorm = 0;
    for (real v : actions) rnorm += v * v;
    if (r_sqrt(rnorm) > domain_radius_ * real(1 + 1e-12))
        fail(errc::invalid_argument, "solve_angle: |I| exceeds domain_radius");

    std::vector<real> theta(phi);
    compiled_series::jet jet;
    real prev_step = -1;
    bool use_newton = false;
    for (int it = 0; it < solver_.max_iters; ++it) {
        cg_.derivatives(theta.data(), actions.data(), nullptr, &jet);
        // residual F = theta + grad_I g - phi (wrapped)
        real worst = 0;
        std::vector<real> f(n);
        for (int j = 0; j < n; ++j) {
            f[j] = wrap_pi(theta[j] + jet.d_action[j] - phi[j]);
            worst = std::max(worst, r_abs(f[j]));
        }
        if (double(worst) <= solver_.residual_tol) return theta;

        if (!use_newton) {
            // Picard: theta <- theta - damping * F
            for (int j = 0; j < n; ++j) theta[j] -= real(solver_.damping) * f[j];
            if (prev_step > real(0) && worst > real(solver_.contraction_switch) * prev_step &&
                it >= 2)
                use_newton = true;
            prev_step = worst;
            continue;
        }
        // Newton: J = Id + d(grad_I g)/dtheta; J[j][l] = delta + d2_ta[l*n+j]
        std::vector<real> jac(n * n, 0);
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                jac[j * n + l] = (j == l ? real(1) : real(0)) + jet.d2_ta[l * n + j];
        std::vector<real> rhs(f);
        solve_dense(jac, rhs, n);
        for (int j = 0; j < n; ++j) theta[j] -= rhs[j];
    }
    fail(errc::no_convergence,
         "solve_angle: no convergence (domain_radius too large for this action)");
}

void canonical_map::apply(const std::vector<real>& phi, const std::vector<real>& actions,
                          std::vector<real>& x_out, std::vector<real>& y_out) const {
    const int n = dim();
    x_out = solve_angle(phi, actions);
    compiled_series::jet jet;
    cg_.derivatives(x_out.data(), actions.data(), nullptr, &jet);
    y_out.assign(n, 0);
    for (int j = 0; j < n; ++j) y_out[j] = actions[j] + jet.d_theta[j];
}

void canonical_map::invert(const std::vector<real>& x, const std::vector<real>& y,
                           std::vector<real>& phi_out, std::vector<real>& actions_out) const {
    const int n = dim();
    actions_out = y;
    compiled_series::jet jet;
    for (int it = 0; it < solver_.max_iters; ++it) {
        cg_.derivatives(x.data(), actions_out.data(), nullptr, &jet);
        real worst = 0;
        for (int j = 0; j < n; ++j) {
            real next = y[j] - jet.d_theta[j];
            worst = std::max(worst, r_abs(next - actions_out[j]));
            actions_out[j] = next;
        }
        if (double(worst) <= solver_.residual_tol) break;
        if (it + 1 == solver_.max_iters)
            fail(errc::no_convergence, "invert: action iteration did not converge");
    }
    cg_.derivatives(x.data(), actions_out.data(), nullptr, &jet);
    phi_out.assign(n, 0);
    for (int j = 0; j < n; ++j) phi_out[j] = x[j] + jet.d_action[j];
}

real canonical_map::estimate_domain_radius(const taylor_fourier& g, real start_radius) {
    const int n = g.dim();
    compiled_series cg(g);
    compiled_series::jet jet;
    const int grid = n == 1 ? 64 : (n == 2 ? 16 : 6);
    std::vector<real> theta(n), actions(n);
    real r = start_radius;
    for (int step = 0; step < 60; ++step) {
        real factor = 0;
        // directions: coordinate axes (both signs) and the diagonal
        std::vector<std::vector<real>> dirs;
        for (int j = 0; j < n; ++j) {
            std::vector<real> d(n, 0);
            d[j] = 1;
            dirs.push_back(d);
            d[j] = -1;
            dirs.push_back(d);
        }
        dirs.push_back(std::vector<real>(n, real(1) / r_sqrt(real(n))));
        std::vector<int> idx(n, 0);
        for (;;) {
            for (int j = 0; j < n; ++j) theta[j] = real(kTwoPi) * real(idx[j]) / real(grid);
            for (const auto& d : dirs) {
                for (int j = 0; j < n; ++j) actions[j] = r * d[j];
                cg.derivatives(theta.data(), actions.data(), nullptr, &jet);
                // infinity norm of d(grad_I g)/dtheta
                for (int j = 0; j < n; ++j) {
                    real row = 0;
                    for (int l = 0; l < n; ++l) row += r_abs(jet.d2_ta[l * n + j]);
                    factor = std::max(factor, row);
                }
            }
            int axis = 0;
            while (axis < n && ++idx[axis] == grid) idx[axis++] = 0;
            if (axis == n) break;
        }
        if (factor < real(0.9)) return r;
        r = r / 2;
    }
    return r;
}

flatness_report flatness_scan(const hamiltonian_spec& spec, const bnf_result& result,
                              const std::vector<double>& radii, int samples, unsigned seed,
                              const angle_solver_options& solver) {
    const int n = spec.dim();
#ifdef TORUSNF_REAL_FLOAT128
    using high = real;
#else
    using high = long double;
#endif
    canonical_map map(result.g, spec.domain_radius(), solver);
    compiled_series htilde(spec.coeffs());

    flatness_report report;
    report.rows.resize(radii.size());
    rng master(seed);
    std::vector<std::uint64_t> row_seeds;
    for (size_t i = 0; i < radii.size(); ++i) row_seeds.push_back(master.next_u64());

    parallel_for(radii.size(), [&](std::size_t ridx) {
        rng gen(row_seeds[ridx]);
        const double r = radii[ridx];
        high sup = 0;
        for (int s = 0; s < samples; ++s) {
            std::vector<real> phi(n), actions(n);
            for (int j = 0; j < n; ++j) phi[j] = real(kTwoPi * gen.next_double());
            // random direction on the Euclidean sphere of radius r
            double norm2 = 0;
            std::vector<double> dir(n);
            do {
                norm2 = 0;
                for (int j = 0; j < n; ++j) {
                    // Box-Muller-free symmetric draw is fine for a direction
                    dir[j] = gen.next_symmetric();
                    norm2 += dir[j] * dir[j];
                }
            } while (norm2 < 1e-12);
            double norm = std::sqrt(norm2);
            for (int j = 0; j < n; ++j) actions[j] = real(r * dir[j] / norm);

            std::vector<real> x, y;
            map.apply(phi, actions, x, y);

            // residual in extended precision: the identity
            // H(theta, I + g_theta(theta, I)) = H0(I) + R(theta, I)
            // holds for any theta, so only arithmetic noise matters here.
            std::vector<high> xs(n), is(n), ys(n), gt;
            for (int j = 0; j < n; ++j) {
                xs[j] = high(x[j]);
                is[j] = high(actions[j]);
            }
            map.grad_theta(xs, is, gt);
            for (int j = 0; j < n; ++j) ys[j] = is[j] + gt[j];
            high h = 0;
            for (int j = 0; j < n; ++j) h += high(spec.omega().omega[j]) * ys[j];
            h += htilde.value(xs.data(), ys.data());
            high h0 = result.eval_h0(is);
            high res = h - h0;
            if (res < high(0)) res = -res;
            sup = std::max(sup, res);
        }
        report.rows[ridx] = {r, double(sup)};
    });

    double max_sup = 0;
    for (const auto& row : report.rows) max_sup = std::max(max_sup, row.sup_residual);
    if (max_sup < 1e-15) return report; // rounding floor; no scaling law to fit

    // least-squares slope of log(sup) vs log(r)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& row : report.rows) {
        if (row.sup_residual <= 0) continue;
        double lx = std::log(row.radius), ly = std::log(row.sup_residual);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    if (cnt >= 2) {
        report.slope_fitted = true;
        report.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    }
    return report;
}

double symplecticity_defect(const canonical_map& map, const std::vector<real>& phi,
                            const std::vector<real>& actions, double h) {
    const int n = map.dim();
    const int d = 2 * n;
    std::vector<double> jac(d * d, 0);
    auto eval = [&](const std::vector<real>& p, const std::vector<real>& a, std::vector<real>& x,
                    std::vector<real>& y) { map.apply(p, a, x, y); };
    std::vector<real> xp, yp, xm, ym;
    for (int col = 0; col < d; ++col) {
        std::vector<real> p(phi), a(actions);
        if (col < n)
            p[col] += real(h);
        else
            a[col - n] += real(h);
        eval(p, a, xp, yp);
        if (col < n)
            p[col] -= real(2 * h);
        else
            a[col - n] -= real(2 * h);
        eval(p, a, xm, ym);
        for (int row = 0; row < d; ++row) {
            real num = row < n ? wrap_pi(xp[row] - xm[row]) : yp[row - n] - ym[row - n];
            jac[row * d + col] = double(num) / (2 * h);
        }
    }
    // Omega = [[0, I], [-I, 0]] in (theta..., I...) ordering
    auto omega_entry = [&](int r, int c) -> double {
        if (r < n && c == r + n) return 1;
        if (r >= n && c == r - n) return -1;
        return 0;
    };
    double worst = 0;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            double acc = 0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    acc += jac[i * d + r] * omega_entry(i, j) * jac[j * d + c];
            worst = std::max(worst, std::abs(acc - omega_entry(r, c)));
        }
    return worst;
}

} // namespace tnf
