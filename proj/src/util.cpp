#include "bnf/util.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace tnf {

std::int64_t binomial_i64(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i; // exact: r*(n-k+i) is divisible by i here
    }
    return r;
}

std::int64_t multinomial_i64(const multi_index& alpha, const std::vector<multi_index>& parts) {
    // alpha! / prod(parts[j]!) computed as a product of per-axis multinomials,
    // each built from binomials so every intermediate stays integral.
    std::int64_t result = 1;
    for (size_t axis = 0; axis < alpha.size(); ++axis) {
        int remaining = alpha[axis];
        for (const auto& p : parts) {
            int c = p[axis];
            if (c == 0) continue;
            result *= binomial_i64(remaining, c);
            remaining -= c;
        }
        if (remaining != 0) fail(errc::invalid_argument, "multinomial: parts do not sum to alpha");
    }
    return result;
}

static void gen_degree(int dim, int degree, multi_index& cur, std::vector<multi_index>& out) {
    if ((int)cur.size() == dim - 1) {
        cur.push_back(degree);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= degree; ++v) {
        cur.push_back(v);
        gen_degree(dim, degree - v, cur, out);
        cur.pop_back();
    }
}

std::vector<multi_index> multi_indices_of_degree(int dim, int degree) {
    std::vector<multi_index> out;
    multi_index cur;
    gen_degree(dim, degree, cur, out);
    return out;
}

int worker_count() {
    const char* env = std::getenv("TORUSNF_WORKERS");
    if (!env) return 1;
    int n = std::atoi(env);
    if (n < 1) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw > 0 && n > (int)hw * 4) n = (int)hw * 4;
    return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    int workers = worker_count();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex guard;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(guard);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    int spawn = (int)std::min<std::size_t>(workers, count);
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void solve_dense(std::vector<real>& a, std::vector<real>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        real best = r_abs(a[col * n + col]);
        for (int r = col + 1; r < n; ++r) {
            real v = r_abs(a[r * n + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (!(best > real(0))) fail(errc::no_convergence, "singular linear system");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        real d = a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            real f = a[r * n + col] / d;
            if (f == real(0)) continue;
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        real s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
        b[r] = s / a[r * n + r];
    }
}

} // namespace tnf
