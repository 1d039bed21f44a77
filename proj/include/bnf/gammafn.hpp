#pragma once

#include <string>
#include <vector>

#include "bnf/real.hpp"

namespace tnf {

// log Gamma(x) for x > 0, Lanczos g=7 with recurrence below 0.5;
// relative error on Gamma stays under 1e-12 across the positive axis.
real log_gamma(real x);

inline real gamma_fn(real x) { return r_exp(log_gamma(x)); }

// Euler Beta via log-Gamma differences.
real beta_fn(real x, real y);
real log_beta(real x, real y);

// Outcome of one inequality scan: the worst LHS/RHS ratio over the grid,
// the point attaining it, and a pass flag (ratio <= 1 + 1e-10 when the
// inequality has no free constant; fitted suites instead report the
// smallest constant and their own stability criterion).
struct inequality_report {
    std::string name;
    std::string grid;
    double worst_ratio = 0.0;
    bool pass = false;
    std::string witness;
    double fitted_constant = 0.0; // 0 when the check has no fitted constant
};

inline constexpr double kInequalitySlack = 1e-10;

// Gamma(x)Gamma(y) == Gamma(x+y) B(x,y) on seeded positive samples.
inequality_report check_gamma_beta_identity(unsigned seed = 0, int samples = 200);

// B(a+b, c+d) <= sqrt(B(2a,2c) B(2b,2d)) on the product grid
// a,b,c,d in {0.25, 0.5, 1, 2, 5}.
inequality_report check_beta_cauchy();

// B(x,y) >= 4^{-x-y} on a log grid x,y in [0.1, 20].
inequality_report check_beta_lower();

// binom([x]+[y],[x])^nu B(nu x + delta, nu y + delta)
//   <= C' / min(x+1, y+1)^{(nu+1)/2}
// over x,y in [0, 30]; returns the smallest C' on the grid and checks it
// is stable (within 5%) under refining the grid step 2x.
inequality_report check_gamma_ratio(double nu, double delta,
                                    double grid_max = 30.0, double grid_step = 0.5);

// C^{-m} Gamma(rho m + 1) <= (m!)^rho <= C^m Gamma(rho m + 1): smallest C
// over 1 <= m <= m_max.
inequality_report check_stirling_equiv(double rho, int m_max);

} // namespace tnf
