#pragma once

#include <map>
#include <vector>

#include "bnf/fourier.hpp"

namespace tnf {

// Homogeneous polynomial of fixed degree m in the actions with
// Fourier-series coefficients: sum_{|alpha|=m} c_alpha(theta) I^alpha.
// Keys iterate in lexicographic order.
class homogeneous_part {
  public:
    using term_map = std::map<multi_index, fourier_series>;

    homogeneous_part(int dim, int degree) : dim_(dim), degree_(degree) {
        check_dim(dim, "homogeneous_part");
        if (degree < 0) fail(errc::invalid_argument, "homogeneous_part: negative degree");
    }

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    const term_map& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    const fourier_series* term(const multi_index& alpha) const;
    void set_term(const multi_index& alpha, fourier_series series);
    void add_term(const multi_index& alpha, const fourier_series& series,
                  const fourier_config& cfg = default_fourier_config());

  private:
    int dim_;
    int degree_;
    term_map terms_;
};

// term-by-term a*x + b*y on equal-degree parts
homogeneous_part hp_linear_combine(real a, const homogeneous_part& x,
                                   real b, const homogeneous_part& y,
                                   const fourier_config& cfg = default_fourier_config());

// Graded product: degree adds, action monomials convolve, coefficient
// series multiply.  fourier_cap limits result modes (< 0: lossless).
homogeneous_part hp_multiply(const homogeneous_part& a, const homogeneous_part& b,
                             int fourier_cap = -1, real* discarded = nullptr,
                             const fourier_config& cfg = default_fourier_config());

real hp_p_norm_sum(const homogeneous_part& part, double s); // sum_alpha P_s(c_alpha)

// Graded container sum_m sum_{|alpha|=m} c_alpha(theta) I^alpha over a
// degree window [m_min, m_max].
class taylor_fourier {
  public:
    taylor_fourier(int dim, int m_min, int m_max) : dim_(dim), m_min_(m_min), m_max_(m_max) {
        check_dim(dim, "taylor_fourier");
        if (m_min < 0 || m_max < m_min)
            fail(errc::invalid_argument, "taylor_fourier: bad degree window");
    }

    int dim() const { return dim_; }
    int m_min() const { return m_min_; }
    int m_max() const { return m_max_; }
    const std::map<int, homogeneous_part>& parts() const { return parts_; }

    const homogeneous_part* part(int m) const;
    void set_part(homogeneous_part part);
    bool empty() const { return parts_.empty(); }

    // sum of real(c_alpha(theta)) * I^alpha over all stored parts
    template <typename S>
    S eval(const std::vector<S>& theta, const std::vector<S>& actions) const;

  private:
    int dim_;
    int m_min_, m_max_;
    std::map<int, homogeneous_part> parts_;
};

enum class grad_var { angle, action };

// d/dtheta_j keeps degrees; d/dI_j lowers each degree by one with the
// usual multiplicity alpha_j.  axis is 1-based.
taylor_fourier tf_gradient(const taylor_fourier& f, grad_var var, int axis,
                           const fourier_config& cfg = default_fourier_config());

// Membership tuple of the index family N(alpha, m): multi-indices
// (alpha^1, ..., alpha^{m-1}) with sum alpha^j = alpha and
// sum j|alpha^j| = m.
struct index_tuple {
    int m = 0;
    std::vector<multi_index> alphas;
};

std::vector<index_tuple> enumerate_index_set(const multi_index& alpha, int m);

// sum over N(alpha,m) of alpha!/(alpha^1! ... alpha^{m-1}!), exact
// integers; equals (m-1)! / ((m-|alpha|)! (|alpha|-1)!).
std::int64_t multinomial_weight_sum(const multi_index& alpha, int m);
std::int64_t multinomial_weight_closed_form(const multi_index& alpha, int m);

// One graded component per axis: grades[axis][k] holds the degree-k part
// of the axis component of I + sum_k d(g_k)/dtheta.  Grade 1 must be the
// unit monomial I_axis; grades 2..m-1 are corrections.
class power_expander {
  public:
    power_expander(int dim, std::vector<std::map<int, homogeneous_part>> axis_grades,
                   int fourier_cap_per_grade = -1,
                   const fourier_config& cfg = default_fourier_config());

    // A_{alpha,m}: the degree-m homogeneous component of
    // prod_j (axis component_j)^{alpha_j}, by iterated graded products
    // with per-axis memoization.
    homogeneous_part expand(const multi_index& alpha, int m);

    real discarded_mass() const { return discarded_; }

    static std::vector<std::map<int, homogeneous_part>>
    grades_from_generating(const taylor_fourier& g, int max_grade,
                           const fourier_config& cfg = default_fourier_config());

  private:
    using graded = std::map<int, homogeneous_part>;

    int dim_;
    int cap_per_grade_;
    fourier_config cfg_;
    std::vector<std::vector<graded>> powers_; // powers_[axis][e] = component^e
    real discarded_ = 0;
    int max_degree_ = 0;

    graded multiply_graded(const graded& a, const graded& b, int max_degree);
    const graded& axis_power(int axis, int exponent);
};

// Convenience wrapper matching the one-shot operation shape.
homogeneous_part power_expansion(const std::vector<std::map<int, homogeneous_part>>& axis_grades,
                                 const multi_index& alpha, int m,
                                 int fourier_cap_per_grade = -1,
                                 const fourier_config& cfg = default_fourier_config());

template <typename S>
S taylor_fourier::eval(const std::vector<S>& theta, const std::vector<S>& actions) const {
    S acc = S(0);
    for (const auto& [m, part] : parts_) {
        for (const auto& [alpha, series] : part.terms()) {
            S mono = S(1);
            for (int j = 0; j < dim_; ++j)
                for (int t = 0; t < alpha[j]; ++t) mono *= actions[j];
            acc += series.eval(theta) * mono;
        }
    }
    return acc;
}

} // namespace tnf
