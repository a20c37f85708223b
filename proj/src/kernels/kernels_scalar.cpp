#include <cmath>
#include <limits>

#include "gbmlab/kernels.hpp"

// Scalar reference kernels. Reductions stride over four accumulators so that
// the AVX2 variants (one accumulator per lane) produce the same rounding.

namespace gbmlab::kernels::scalar {

void heat_step(const double* u, double* out, std::size_t n, double c_up, double c_dn) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d2 = (u[i - 1] - 2.0 * u[i]) + u[i + 1];
        const double pos = std::fmax(d2, 0.0);
        const double neg = std::fmin(d2, 0.0);
        out[i] = (u[i] + c_up * pos) + c_dn * neg;
    }
}

void dp_candidate_max(double* acc, const double* v, std::size_t n, double p_dn, double p_mid,
                      double p_up, double off, const double* off_arr) {
    if (off_arr) {
        for (std::size_t i = 0; i < n; ++i) {
            const double base = off + off_arr[i];
            const double cand = ((base + p_dn * v[i]) + p_mid * v[i + 1]) + p_up * v[i + 2];
            acc[i] = std::fmax(acc[i], cand);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double cand = ((off + p_dn * v[i]) + p_mid * v[i + 1]) + p_up * v[i + 2];
            acc[i] = std::fmax(acc[i], cand);
        }
    }
}

void axpy(double* y, const double* x, std::size_t n, double a) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void affine(double* out, const double* x, std::size_t n, double a, double b) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b;
}

void lincomb2(double* out, const double* x, const double* y, std::size_t n, double a, double b) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void euler_update(double* x, const double* b, const double* h, const double* s, const double* dw,
                  std::size_t n, double dt, double qv) {
    for (std::size_t i = 0; i < n; ++i)
        x[i] = ((x[i] + b[i] * dt) + h[i] * qv) + s[i] * dw[i];
}

void abs_diff(double* out, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(x[i] - y[i]);
}

void sq_diff(double* out, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        out[i] = d * d;
    }
}

namespace {

inline double combine4(const double acc[4]) {
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

double sum(const double* x, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] += x[i];
        acc[1] += x[i + 1];
        acc[2] += x[i + 2];
        acc[3] += x[i + 3];
    }
    for (std::size_t k = 0; i + k < n; ++k) acc[k] += x[i + k];
    return combine4(acc);
}

double sum_sq(const double* x, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] += x[i] * x[i];
        acc[1] += x[i + 1] * x[i + 1];
        acc[2] += x[i + 2] * x[i + 2];
        acc[3] += x[i + 3] * x[i + 3];
    }
    for (std::size_t k = 0; i + k < n; ++k) acc[k] += x[i + k] * x[i + k];
    return combine4(acc);
}

double max(const double* x, std::size_t n) {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    double acc[4] = {ninf, ninf, ninf, ninf};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] = std::fmax(acc[0], x[i]);
        acc[1] = std::fmax(acc[1], x[i + 1]);
        acc[2] = std::fmax(acc[2], x[i + 2]);
        acc[3] = std::fmax(acc[3], x[i + 3]);
    }
    for (std::size_t k = 0; i + k < n; ++k) acc[k] = std::fmax(acc[k], x[i + k]);
    return std::fmax(std::fmax(acc[0], acc[1]), std::fmax(acc[2], acc[3]));
}

double sum_abs_diff(const double* x, const double* y, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] += std::fabs(x[i] - y[i]);
        acc[1] += std::fabs(x[i + 1] - y[i + 1]);
        acc[2] += std::fabs(x[i + 2] - y[i + 2]);
        acc[3] += std::fabs(x[i + 3] - y[i + 3]);
    }
    for (std::size_t k = 0; i + k < n; ++k) acc[k] += std::fabs(x[i + k] - y[i + k]);
    return combine4(acc);
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double d0 = x[i] - y[i];
        const double d1 = x[i + 1] - y[i + 1];
        const double d2 = x[i + 2] - y[i + 2];
        const double d3 = x[i + 3] - y[i + 3];
        acc[0] += d0 * d0;
        acc[1] += d1 * d1;
        acc[2] += d2 * d2;
        acc[3] += d3 * d3;
    }
    for (std::size_t k = 0; i + k < n; ++k) {
        const double d = x[i + k] - y[i + k];
        acc[k] += d * d;
    }
    return combine4(acc);
}

double max_abs_diff(const double* x, const double* y, std::size_t n) {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    double acc[4] = {ninf, ninf, ninf, ninf};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] = std::fmax(acc[0], std::fabs(x[i] - y[i]));
        acc[1] = std::fmax(acc[1], std::fabs(x[i + 1] - y[i + 1]));
        acc[2] = std::fmax(acc[2], std::fabs(x[i + 2] - y[i + 2]));
        acc[3] = std::fmax(acc[3], std::fabs(x[i + 3] - y[i + 3]));
    }
    for (std::size_t k = 0; i + k < n; ++k) acc[k] = std::fmax(acc[k], std::fabs(x[i + k] - y[i + k]));
    return std::fmax(std::fmax(acc[0], acc[1]), std::fmax(acc[2], acc[3]));
}

const KernelTable kTable = {
    heat_step, dp_candidate_max, axpy,        affine,      lincomb2,
    euler_update, abs_diff,      sq_diff,     sum,         sum_sq,
    max,          sum_abs_diff,  sum_sq_diff, max_abs_diff,
};

}  // namespace gbmlab::kernels::scalar

namespace gbmlab::kernels {
const KernelTable& scalar_table() { return scalar::kTable; }
}  // namespace gbmlab::kernels
