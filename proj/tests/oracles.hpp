#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "bnf/series.hpp"

namespace tnf::test {

// ---- A_{alpha,m} by direct enumeration of N(alpha,m) -------------------
// (the implementation uses iterated graded products; this multiplies the
// tuple factors term by term and sums with the exact multinomial weights)
inline homogeneous_part power_expansion_enumerated(
    const std::vector<std::map<int, homogeneous_part>>& axis_grades, const multi_index& alpha,
    int m) {
    const int n = (int)axis_grades.size();
    homogeneous_part acc(n, m);
    for (const auto& tuple : enumerate_index_set(alpha, m)) {
        double weight = double(multinomial_i64(alpha, tuple.alphas));
        homogeneous_part prod(n, 0);
        prod.set_term(multi_index(n, 0), fourier_series::constant(n, 1));
        bool zero = false;
        for (size_t slot = 0; slot < tuple.alphas.size(); ++slot) {
            const multi_index& aj = tuple.alphas[slot];
            int grade = (int)slot + 1;
            for (int axis = 0; axis < n && !zero; ++axis) {
                for (int e = 0; e < aj[axis]; ++e) {
                    auto it = axis_grades[axis].find(grade);
                    if (it == axis_grades[axis].end()) {
                        zero = true;
                        break;
                    }
                    prod = hp_multiply(prod, it->second);
                }
            }
            if (zero) break;
        }
        if (zero) continue;
        for (const auto& [gamma, series] : prod.terms())
            acc.add_term(gamma, fs_linear_combine(cplx(real(weight)), series, cplx(0), series));
    }
    return acc;
}

// ---- pendulum family closed forms (hand-derived) ------------------------
// H = omega r + (1 + eps cos theta) r^2 / 2
struct pendulum_forms {
    double omega, eps;

    double r2() const { return 0.5; }
    double r3() const { return -eps * eps / (4 * omega); }
    double r4() const { return 5 * eps * eps / (16 * omega * omega); }

    // g_m(theta) I^m with g_m = sum_k a_k sin(k theta)
    std::vector<double> g2_sin() const { return {-eps / (2 * omega)}; }
    std::vector<double> g3_sin() const {
        return {eps / (2 * omega * omega), eps * eps / (8 * omega * omega)};
    }
    std::vector<double> g4_sin() const {
        double c = -eps / (2 * omega * omega * omega);
        return {c * (1 + 7 * eps * eps / 16), c * 9 * eps / 16, c * 5 * eps * eps / 48};
    }
};

// ---- normal form values from the action integral ------------------------
// For the pendulum family the energy as a function of the action is an
// independent route to H0: I(E) = sum_j binom(1/2, j) 2^j <c^{j-1}> E^j
// / omega^{2j-1}, c = 1 + eps cos theta; series inversion gives E(I) and
// the R_m are its coefficients.
inline std::vector<double> pendulum_h0_coeffs(double omega, double eps, int orders) {
    // <c^p> by 1-D quadrature (trapezoid on a periodic function is
    // spectrally accurate)
    auto cmean = [&](int p) {
        const int grid = 4096;
        double acc = 0;
        for (int i = 0; i < grid; ++i) {
            double th = 2.0 * M_PI * i / grid;
            acc += std::pow(1.0 + eps * std::cos(th), p);
        }
        return acc / grid;
    };
    // binom(1/2, j)
    auto half_binom = [&](int j) {
        double v = 1;
        for (int i = 0; i < j; ++i) v *= (0.5 - i) / (i + 1);
        return v;
    };
    int terms = orders + 2;
    std::vector<double> ic(terms + 1, 0.0); // I(E) = sum_{j>=1} ic[j] E^j
    for (int j = 1; j <= terms; ++j)
        ic[j] = half_binom(j) * std::pow(2.0, j) * cmean(j - 1) / std::pow(omega, 2 * j - 1);
    // invert the series: E(I) = sum e[j] I^j with e[1] = 1/ic[1]
    std::vector<double> e(terms + 1, 0.0);
    e[1] = 1.0 / ic[1];
    for (int k = 2; k <= terms; ++k) {
        // coefficient of I^k in I(E(I)) must vanish
        // compute composite coefficient with current e[2..k-1], unknown e[k]
        // I(E(I)) = sum_j ic[j] (E(I))^j; only j <= k contribute to I^k
        std::vector<double> epow(k + 1, 0.0); // coefficients of E(I)^j, rebuilt per j
        // start with E^1 = e
        std::vector<std::vector<double>> pows(k + 1, std::vector<double>(k + 1, 0.0));
        for (int i = 1; i < k; ++i) pows[1][i] = e[i];
        pows[1][k] = 0; // unknown enters linearly via ic[1] e[k]
        for (int j = 2; j <= k; ++j)
            for (int a = 1; a <= k; ++a)
                for (int b = 1; a + b <= k; ++b) pows[j][a + b] += pows[j - 1][a] * e[b];
        double acc = 0;
        for (int j = 2; j <= k; ++j) acc += ic[j] * pows[j][k];
        e[k] = -acc / ic[1];
    }
    e.resize(orders + 1);
    return e; // e[m] is the R_m coefficient for m >= 2, e[1] = omega
}

} // namespace tnf::test
