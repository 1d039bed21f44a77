#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bnf/real.hpp"

namespace tnf {

// Error taxonomy shared by the core and surfaced through the C API.
enum class errc {
    dimension_mismatch,
    axis_range,
    non_zero_mean,
    resonant_mode,
    no_convergence,
    schema,
    io,
    invalid_argument,
    degenerate_input,
    internal,
};

class error : public std::runtime_error {
  public:
    error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

// Integer vectors serve both as Fourier modes (entries in Z) and as
// action multi-indices (entries in N).
using mode_index = std::vector<int>;
using multi_index = std::vector<int>;

inline int order_of(const mode_index& k) {
    int s = 0;
    for (int kj : k) s += kj < 0 ? -kj : kj;
    return s;
}

inline mode_index negate(const mode_index& k) {
    mode_index r(k);
    for (int& v : r) v = -v;
    return r;
}

inline std::string index_to_string(const mode_index& k) {
    std::string s = "[";
    for (size_t i = 0; i < k.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(k[i]);
    }
    return s + "]";
}

// log(v!) for a multi-index, and the exact integer multinomial
// alpha! / (beta_1! ... beta_p!) used by the index-set enumeration.
std::int64_t binomial_i64(int n, int k);
std::int64_t multinomial_i64(const multi_index& alpha, const std::vector<multi_index>& parts);

// All multi-indices of the given dimension with |alpha| == degree,
// in lexicographic order (keys within one homogeneous part).
std::vector<multi_index> multi_indices_of_degree(int dim, int degree);

// Deterministic splittable PRNG (xorshift-family).  std::uniform_*
// distributions are implementation-defined, so tests draw through this.
class rng {
  public:
    explicit rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi] inclusive.
    int next_int(int lo, int hi) {
        return lo + int(next_u64() % std::uint64_t(hi - lo + 1));
    }

    double next_symmetric() { return 2.0 * next_double() - 1.0; }

  private:
    std::uint64_t state_;
};

// Runs body(i) for i in [0, count).  Results must be written to
// pre-sized slots so the outcome does not depend on the worker count,
// which comes from TORUSNF_WORKERS (default 1).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);
int worker_count();

// In-place solve of a dense n x n system (partial pivoting); n stays tiny.
void solve_dense(std::vector<real>& a, std::vector<real>& b, int n);

constexpr int kMaxDim = 8;

inline void check_dim(int n, const char* what) {
    if (n < 1 || n > kMaxDim)
        fail(errc::schema, std::string(what) + ": dim must be in [1," + std::to_string(kMaxDim) + "]");
}

} // namespace tnf
