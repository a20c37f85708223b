#include <cmath>
#include <limits>

#include "gbmlab/kernels.hpp"

// AVX2 kernels. This translation unit is compiled with -mavx2 and
// -ffp-contract=off; tail loops must round exactly like the scalar
// reference, so no FMA anywhere.

#if defined(__AVX2__)
#include <immintrin.h>

namespace gbmlab::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d x) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(x, mask);
}

inline double combine4(__m256d acc) {
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    return (a[0] + a[1]) + (a[2] + a[3]);
}

inline double combine4_max(__m256d acc) {
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    return std::fmax(std::fmax(a[0], a[1]), std::fmax(a[2], a[3]));
}

}  // namespace

void heat_step(const double* u, double* out, std::size_t n, double c_up, double c_dn) {
    if (n < 2) return;
    const std::size_t m = n - 2;  // interior count, indices 1..n-2
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d vc_up = _mm256_set1_pd(c_up);
    const __m256d vc_dn = _mm256_set1_pd(c_dn);
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        const __m256d um = _mm256_loadu_pd(u + i);
        const __m256d uc = _mm256_loadu_pd(u + i + 1);
        const __m256d up = _mm256_loadu_pd(u + i + 2);
        const __m256d d2 = _mm256_add_pd(_mm256_sub_pd(um, _mm256_mul_pd(two, uc)), up);
        const __m256d pos = _mm256_max_pd(d2, zero);
        const __m256d neg = _mm256_min_pd(d2, zero);
        const __m256d r =
            _mm256_add_pd(_mm256_add_pd(uc, _mm256_mul_pd(vc_up, pos)), _mm256_mul_pd(vc_dn, neg));
        _mm256_storeu_pd(out + i + 1, r);
    }
    for (; i < m; ++i) {
        const std::size_t j = i + 1;
        const double d2 = (u[j - 1] - 2.0 * u[j]) + u[j + 1];
        const double pos = std::fmax(d2, 0.0);
        const double neg = std::fmin(d2, 0.0);
        out[j] = (u[j] + c_up * pos) + c_dn * neg;
    }
}

void dp_candidate_max(double* acc, const double* v, std::size_t n, double p_dn, double p_mid,
                      double p_up, double off, const double* off_arr) {
    const __m256d vpd = _mm256_set1_pd(p_dn);
    const __m256d vpm = _mm256_set1_pd(p_mid);
    const __m256d vpu = _mm256_set1_pd(p_up);
    const __m256d voff = _mm256_set1_pd(off);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vd = _mm256_loadu_pd(v + i);
        const __m256d vm = _mm256_loadu_pd(v + i + 1);
        const __m256d vu = _mm256_loadu_pd(v + i + 2);
        __m256d base = voff;
        if (off_arr) base = _mm256_add_pd(base, _mm256_loadu_pd(off_arr + i));
        __m256d cand = _mm256_add_pd(base, _mm256_mul_pd(vpd, vd));
        cand = _mm256_add_pd(cand, _mm256_mul_pd(vpm, vm));
        cand = _mm256_add_pd(cand, _mm256_mul_pd(vpu, vu));
        const __m256d a = _mm256_loadu_pd(acc + i);
        _mm256_storeu_pd(acc + i, _mm256_max_pd(a, cand));
    }
    for (; i < n; ++i) {
        const double base = off_arr ? off + off_arr[i] : off;
        const double cand = ((base + p_dn * v[i]) + p_mid * v[i + 1]) + p_up * v[i + 2];
        acc[i] = std::fmax(acc[i], cand);
    }
}

void axpy(double* y, const double* x, std::size_t n, double a) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void affine(double* out, const double* x, std::size_t n, double a, double b) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(va, vx), vb));
    }
    for (; i < n; ++i) out[i] = a * x[i] + b;
}

void lincomb2(double* out, const double* x, const double* y, std::size_t n, double a, double b) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(va, vx), _mm256_mul_pd(vb, vy)));
    }
    for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void euler_update(double* x, const double* b, const double* h, const double* s, const double* dw,
                  std::size_t n, double dt, double qv) {
    const __m256d vdt = _mm256_set1_pd(dt);
    const __m256d vqv = _mm256_set1_pd(qv);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        vx = _mm256_add_pd(vx, _mm256_mul_pd(_mm256_loadu_pd(b + i), vdt));
        vx = _mm256_add_pd(vx, _mm256_mul_pd(_mm256_loadu_pd(h + i), vqv));
        vx = _mm256_add_pd(vx, _mm256_mul_pd(_mm256_loadu_pd(s + i), _mm256_loadu_pd(dw + i)));
        _mm256_storeu_pd(x + i, vx);
    }
    for (; i < n; ++i) x[i] = ((x[i] + b[i] * dt) + h[i] * qv) + s[i] * dw[i];
}

void abs_diff(double* out, const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(out + i, abs_pd(d));
    }
    for (; i < n; ++i) out[i] = std::fabs(x[i] - y[i]);
}

void sq_diff(double* out, const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(d, d));
    }
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        out[i] = d * d;
    }
}

// Reduction tails accumulate into the lane the scalar reference would use.

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    for (std::size_t k = 0; i + k < n; ++k) a[k] += x[i + k];
    return (a[0] + a[1]) + (a[2] + a[3]);
}

double sum_sq(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(vx, vx));
    }
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    for (std::size_t k = 0; i + k < n; ++k) a[k] += x[i + k] * x[i + k];
    return (a[0] + a[1]) + (a[2] + a[3]);
}

double max(const double* x, std::size_t n) {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    __m256d acc = _mm256_set1_pd(ninf);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    for (std::size_t k = 0; i + k < n; ++k) a[k] = std::fmax(a[k], x[i + k]);
    return std::fmax(std::fmax(a[0], a[1]), std::fmax(a[2], a[3]));
}

double sum_abs_diff(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_add_pd(acc, abs_pd(d));
    }
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    for (std::size_t k = 0; i + k < n; ++k) a[k] += std::fabs(x[i + k] - y[i + k]);
    return (a[0] + a[1]) + (a[2] + a[3]);
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    for (std::size_t k = 0; i + k < n; ++k) {
        const double d = x[i + k] - y[i + k];
        a[k] += d * d;
    }
    return (a[0] + a[1]) + (a[2] + a[3]);
}

double max_abs_diff(const double* x, const double* y, std::size_t n) {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    __m256d acc = _mm256_set1_pd(ninf);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_max_pd(acc, abs_pd(d));
    }
    alignas(32) double a[4];
    _mm256_store_pd(a, acc);
    for (std::size_t k = 0; i + k < n; ++k) a[k] = std::fmax(a[k], std::fabs(x[i + k] - y[i + k]));
    return std::fmax(std::fmax(a[0], a[1]), std::fmax(a[2], a[3]));
}

const KernelTable kTable = {
    .heat_step = heat_step,
    .dp_candidate_max = dp_candidate_max,
    .axpy = axpy,
    .affine = affine,
    .lincomb2 = lincomb2,
    .euler_update = euler_update,
    .abs_diff = abs_diff,
    .sq_diff = sq_diff,
    .sum = sum,
    .sum_sq = sum_sq,
    .max = max,
    .sum_abs_diff = sum_abs_diff,
    .sum_sq_diff = sum_sq_diff,
    .max_abs_diff = max_abs_diff,
};

}  // namespace gbmlab::kernels::avx2

namespace gbmlab::kernels {
const KernelTable* avx2_table() { return &avx2::kTable; }
}  // namespace gbmlab::kernels

#else

namespace gbmlab::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace gbmlab::kernels

#endif  // __AVX2__
