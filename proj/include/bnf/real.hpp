#pragma once

// Coefficient scalar for all series arithmetic.  The default build uses
// double; configuring with TORUSNF_EXTENDED_PRECISION switches to
// __float128 (113-bit significand) for normal-form runs whose g_m span
// more orders of magnitude than double can hold.

#include <cmath>
#include <cstdlib>

#ifdef TORUSNF_REAL_FLOAT128
#include <quadmath.h>
#endif

namespace tnf {

#ifdef TORUSNF_REAL_FLOAT128

using real = __float128;

inline real r_abs(real x) { return fabsq(x); }
inline real r_sqrt(real x) { return sqrtq(x); }
inline real r_sin(real x) { return sinq(x); }
inline real r_cos(real x) { return cosq(x); }
inline real r_exp(real x) { return expq(x); }
inline real r_log(real x) { return logq(x); }
inline real r_pow(real x, real y) { return powq(x, y); }
inline real r_hypot(real x, real y) { return hypotq(x, y); }
inline real r_floor(real x) { return floorq(x); }
inline real r_round(real x) { return roundq(x); }
inline real r_fmod(real x, real y) { return fmodq(x, y); }
inline bool r_finite(real x) { return finiteq(x) != 0; }

#else

using real = double;

inline real r_abs(real x) { return std::fabs(x); }
inline real r_sqrt(real x) { return std::sqrt(x); }
inline real r_sin(real x) { return std::sin(x); }
inline real r_cos(real x) { return std::cos(x); }
inline real r_exp(real x) { return std::exp(x); }
inline real r_log(real x) { return std::log(x); }
inline real r_pow(real x, real y) { return std::pow(x, y); }
inline real r_hypot(real x, real y) { return std::hypot(x, y); }
inline real r_floor(real x) { return std::floor(x); }
inline real r_round(real x) { return std::round(x); }
inline real r_fmod(real x, real y) { return std::fmod(x, y); }
inline bool r_finite(real x) { return std::isfinite(x); }

#endif

// Trig dispatch for code templated on the evaluation scalar (the flatness
// scan runs in extended precision even on double builds).
template <typename S>
struct fp_ops {
    static S cos(S x) { return std::cos(x); }
    static S sin(S x) { return std::sin(x); }
};

#ifdef TORUSNF_REAL_FLOAT128
template <>
struct fp_ops<__float128> {
    static __float128 cos(__float128 x) { return cosq(x); }
    static __float128 sin(__float128 x) { return sinq(x); }
};
#endif

// Minimal complex value type.  std::complex is only specified for
// float/double/long double, so we carry our own to keep the extended
// build well-defined.
struct cplx {
    real re = 0;
    real im = 0;

    cplx() = default;
    constexpr cplx(real r, real i = 0) : re(r), im(i) {}

    cplx operator-() const { return {-re, -im}; }
    cplx& operator+=(const cplx& o) { re += o.re; im += o.im; return *this; }
    cplx& operator-=(const cplx& o) { re -= o.re; im -= o.im; return *this; }
};

inline cplx operator+(cplx a, const cplx& b) { return a += b; }
inline cplx operator-(cplx a, const cplx& b) { return a -= b; }
inline cplx operator*(const cplx& a, const cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline cplx operator*(real s, const cplx& a) { return {s * a.re, s * a.im}; }
inline cplx operator*(const cplx& a, real s) { return s * a; }
inline cplx conj(const cplx& a) { return {a.re, -a.im}; }
inline real abs(const cplx& a) { return r_hypot(a.re, a.im); }

// Division by a purely imaginary number i*d; exact up to one rounding
// per component.  This is the only division the homological solver needs.
inline cplx div_by_imag(const cplx& a, real d) { return {a.im / d, -a.re / d}; }

inline cplx operator/(const cplx& a, real s) { return {a.re / s, a.im / s}; }

} // namespace tnf
