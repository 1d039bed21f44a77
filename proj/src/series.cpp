#include "bnf/series.hpp"

#include <algorithm>

namespace tnf {

const fourier_series* homogeneous_part::term(const multi_index& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? nullptr : &it->second;
}

void homogeneous_part::set_term(const multi_index& alpha, fourier_series series) {
    if ((int)alpha.size() != dim_) fail(errc::dimension_mismatch, "set_term: key dimension");
    if (order_of(alpha) != degree_)
        fail(errc::invalid_argument, "set_term: |alpha| != part degree");
    if (series.dim() != dim_) fail(errc::dimension_mismatch, "set_term: series dimension");
    if (series.empty()) {
        terms_.erase(alpha);
        return;
    }
    terms_.insert_or_assign(alpha, std::move(series));
}

void homogeneous_part::add_term(const multi_index& alpha, const fourier_series& series,
                                const fourier_config& cfg) {
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        set_term(alpha, series);
        return;
    }
    fourier_series sum = fs_linear_combine(cplx(1), it->second, cplx(1), series, cfg);
    if (sum.empty())
        terms_.erase(it);
    else
        it->second = std::move(sum);
}

homogeneous_part hp_linear_combine(real a, const homogeneous_part& x,
                                   real b, const homogeneous_part& y,
                                   const fourier_config& cfg) {
    if (x.dim() != y.dim() || x.degree() != y.degree())
        fail(errc::dimension_mismatch, "hp_linear_combine: incompatible parts");
    homogeneous_part out(x.dim(), x.degree());
    for (const auto& [alpha, s] : x.terms())
        out.add_term(alpha, fs_linear_combine(cplx(a), s, cplx(0), s, cfg), cfg);
    for (const auto& [alpha, s] : y.terms())
        out.add_term(alpha, fs_linear_combine(cplx(b), s, cplx(0), s, cfg), cfg);
    return out;
}

homogeneous_part hp_multiply(const homogeneous_part& a, const homogeneous_part& b,
                             int fourier_cap, real* discarded, const fourier_config& cfg) {
    if (a.dim() != b.dim()) fail(errc::dimension_mismatch, "hp_multiply: dim mismatch");
    const int n = a.dim();
    homogeneous_part out(n, a.degree() + b.degree());
    multi_index gamma(n);
    for (const auto& [alpha, sa] : a.terms())
        for (const auto& [beta, sb] : b.terms()) {
            for (int j = 0; j < n; ++j) gamma[j] = alpha[j] + beta[j];
            out.add_term(gamma, fs_product(sa, sb, fourier_cap, discarded, cfg), cfg);
        }
    return out;
}

real hp_p_norm_sum(const homogeneous_part& part, double s) {
    real acc = 0;
    for (const auto& [alpha, series] : part.terms()) acc += modified_norm(series, s).value;
    return acc;
}

const homogeneous_part* taylor_fourier::part(int m) const {
    auto it = parts_.find(m);
    return it == parts_.end() ? nullptr : &it->second;
}

void taylor_fourier::set_part(homogeneous_part part) {
    if (part.dim() != dim_) fail(errc::dimension_mismatch, "set_part: dim mismatch");
    if (part.degree() < m_min_ || part.degree() > m_max_)
        fail(errc::invalid_argument, "set_part: degree outside window");
    if (part.empty()) {
        parts_.erase(part.degree());
        return;
    }
    parts_.insert_or_assign(part.degree(), std::move(part));
}

taylor_fourier tf_gradient(const taylor_fourier& f, grad_var var, int axis,
                           const fourier_config& cfg) {
    if (axis < 1 || axis > f.dim()) fail(errc::axis_range, "tf_gradient: axis out of range");
    if (var == grad_var::angle) {
        taylor_fourier out(f.dim(), f.m_min(), f.m_max());
        for (const auto& [m, part] : f.parts()) {
            homogeneous_part dp(f.dim(), m);
            for (const auto& [alpha, series] : part.terms())
                dp.set_term(alpha, fs_derivative(series, axis, cfg));
            out.set_part(std::move(dp));
        }
        return out;
    }
    int lo = std::max(0, f.m_min() - 1);
    int hi = std::max(lo, f.m_max() - 1);
    taylor_fourier out(f.dim(), lo, hi);
    for (const auto& [m, part] : f.parts()) {
        if (m == 0) continue;
        homogeneous_part dp(f.dim(), m - 1);
        for (const auto& [alpha, series] : part.terms()) {
            int mult = alpha[axis - 1];
            if (mult == 0) continue;
            multi_index lowered(alpha);
            lowered[axis - 1] -= 1;
            dp.add_term(lowered, fs_linear_combine(cplx(real(mult)), series, cplx(0), series, cfg),
                        cfg);
        }
        if (!dp.empty()) out.set_part(std::move(dp));
    }
    return out;
}

namespace {

void enumerate_rec(const multi_index& alpha, int m, int slot, multi_index& remaining,
                   int weight_left, std::vector<multi_index>& acc,
                   std::vector<index_tuple>& out) {
    const int n = (int)alpha.size();
    int rem_len = 0;
    for (int v : remaining) rem_len += v;
    if (slot > m - 1) {
        if (rem_len == 0 && weight_left == 0) out.push_back({m, acc});
        return;
    }
    // every remaining unit costs at least `slot`
    if (weight_left < rem_len * slot) return;
    if (rem_len == 0 && weight_left > 0) return;

    // enumerate alpha^slot <= remaining with slot*|alpha^slot| <= weight_left
    std::vector<multi_index> choices;
    multi_index cur(n, 0);
    std::function<void(int, int)> pick = [&](int axis, int budget) {
        if (axis == n) {
            choices.push_back(cur);
            return;
        }
        int cap = std::min(remaining[axis], budget);
        for (int v = 0; v <= cap; ++v) {
            cur[axis] = v;
            pick(axis + 1, budget - v);
        }
        cur[axis] = 0;
    };
    pick(0, weight_left / slot);

    for (const auto& choice : choices) {
        int len = order_of(choice);
        for (int j = 0; j < n; ++j) remaining[j] -= choice[j];
        acc.push_back(choice);
        enumerate_rec(alpha, m, slot + 1, remaining, weight_left - slot * len, acc, out);
        acc.pop_back();
        for (int j = 0; j < n; ++j) remaining[j] += choice[j];
    }
}

} // namespace

std::vector<index_tuple> enumerate_index_set(const multi_index& alpha, int m) {
    const int len = order_of(alpha);
    if (len < 2 || len > m)
        fail(errc::invalid_argument, "enumerate_index_set: need 2 <= |alpha| <= m");
    std::vector<index_tuple> out;
    multi_index remaining(alpha);
    std::vector<multi_index> acc;
    enumerate_rec(alpha, m, 1, remaining, m, acc, out);
    return out;
}

std::int64_t multinomial_weight_sum(const multi_index& alpha, int m) {
    auto tuples = enumerate_index_set(alpha, m);
    std::int64_t sum = 0;
    for (const auto& t : tuples) sum += multinomial_i64(alpha, t.alphas);
    return sum;
}

std::int64_t multinomial_weight_closed_form(const multi_index& alpha, int m) {
    const int len = order_of(alpha);
    if (len < 2 || len > m)
        fail(errc::invalid_argument, "multinomial_weight_closed_form: need 2 <= |alpha| <= m");
    // (m-1)! / ((m-|alpha|)! (|alpha|-1)!) is the binomial C(m-1, |alpha|-1)
    return binomial_i64(m - 1, len - 1);
}

power_expander::power_expander(int dim, std::vector<std::map<int, homogeneous_part>> axis_grades,
                               int fourier_cap_per_grade, const fourier_config& cfg)
    : dim_(dim), cap_per_grade_(fourier_cap_per_grade), cfg_(cfg) {
    if ((int)axis_grades.size() != dim_)
        fail(errc::invalid_argument, "power_expander: need one graded component per axis");
    powers_.resize(dim_);
    for (int j = 0; j < dim_; ++j) {
        if (axis_grades[j].find(1) == axis_grades[j].end())
            fail(errc::invalid_argument, "power_expander: grade-1 unit monomial missing");
        graded unit;
        homogeneous_part one(dim_, 0);
        one.set_term(multi_index(dim_, 0), fourier_series::constant(dim_, 1));
        unit.emplace(0, std::move(one));
        powers_[j].push_back(std::move(unit));            // exponent 0
        powers_[j].push_back(std::move(axis_grades[j]));  // exponent 1
    }
}

std::vector<std::map<int, homogeneous_part>>
power_expander::grades_from_generating(const taylor_fourier& g, int max_grade,
                                       const fourier_config& cfg) {
    const int n = g.dim();
    std::vector<std::map<int, homogeneous_part>> axes(n);
    for (int j = 0; j < n; ++j) {
        homogeneous_part unit(n, 1);
        multi_index e(n, 0);
        e[j] = 1;
        unit.set_term(e, fourier_series::constant(n, 1));
        axes[j].emplace(1, std::move(unit));
        taylor_fourier dg = tf_gradient(g, grad_var::angle, j + 1, cfg);
        for (const auto& [k, part] : dg.parts()) {
            if (k < 2 || k > max_grade || part.empty()) continue;
            axes[j].emplace(k, part);
        }
    }
    return axes;
}

power_expander::graded power_expander::multiply_graded(const graded& a, const graded& b,
                                                       int max_degree) {
    graded out;
    for (const auto& [da, pa] : a)
        for (const auto& [db, pb] : b) {
            int d = da + db;
            if (d > max_degree) continue;
            int cap = cap_per_grade_ < 0 ? -1 : cap_per_grade_ * std::max(d, 1);
            homogeneous_part prod = hp_multiply(pa, pb, cap, &discarded_, cfg_);
            auto it = out.find(d);
            if (it == out.end())
                out.emplace(d, std::move(prod));
            else
                it->second = hp_linear_combine(1, it->second, 1, prod, cfg_);
        }
    return out;
}

const power_expander::graded& power_expander::axis_power(int axis, int exponent) {
    auto& table = powers_[axis];
    while ((int)table.size() <= exponent) {
        graded next = multiply_graded(table.back(), table[1], max_degree_);
        table.push_back(std::move(next));
    }
    return table[exponent];
}

homogeneous_part power_expander::expand(const multi_index& alpha, int m) {
    if ((int)alpha.size() != dim_) fail(errc::dimension_mismatch, "expand: alpha dimension");
    const int len = order_of(alpha);
    if (len < 2) fail(errc::invalid_argument, "expand: need |alpha| >= 2");
    if (m < len) fail(errc::invalid_argument, "expand: need m >= |alpha|");
    if (m > max_degree_) {
        // memoized power tables were truncated at a lower degree; rebuild
        max_degree_ = m;
        for (int j = 0; j < dim_; ++j)
            if (powers_[j].size() > 2) powers_[j].resize(2);
    }
    graded acc;
    homogeneous_part one(dim_, 0);
    one.set_term(multi_index(dim_, 0), fourier_series::constant(dim_, 1));
    acc.emplace(0, std::move(one));
    for (int j = 0; j < dim_; ++j) {
        if (alpha[j] == 0) continue;
        acc = multiply_graded(acc, axis_power(j, alpha[j]), m);
    }
    auto it = acc.find(m);
    if (it == acc.end()) return homogeneous_part(dim_, m);
    return it->second;
}

homogeneous_part power_expansion(const std::vector<std::map<int, homogeneous_part>>& axis_grades,
                                 const multi_index& alpha, int m, int fourier_cap_per_grade,
                                 const fourier_config& cfg) {
    power_expander ex((int)axis_grades.size(), axis_grades, fourier_cap_per_grade, cfg);
    return ex.expand(alpha, m);
}

} // namespace tnf
