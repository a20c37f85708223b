#pragma once

#include <cstddef>
#include <string>

namespace gbmlab::kernels {

// Data-parallel inner loops used by the PDE stepper, the lattice DP, the
// Monte Carlo path engines and the error metrics. Every kernel has a scalar
// reference implementation and an AVX2 variant; the two are bitwise
// equivalent (identical floating-point operation order per element, no FMA
// contraction, reductions use a fixed 4-lane striding regardless of ISA).
// The variant is selected once at runtime.

enum class Isa { scalar, avx2 };

struct KernelTable {
    // out[i] = u[i] + c_up*max(d2,0) + c_dn*min(d2,0), d2 = u[i-1]-2u[i]+u[i+1],
    // for i in [1, n-2]; callers own the boundary rows.
    void (*heat_step)(const double* u, double* out, std::size_t n, double c_up, double c_dn);

    // acc[i] = max(acc[i], base_i + p_dn*v[i] + p_mid*v[i+1] + p_up*v[i+2]),
    // base_i = off (+ off_arr[i] when off_arr != nullptr); v has n+2 entries.
    void (*dp_candidate_max)(double* acc, const double* v, std::size_t n, double p_dn,
                             double p_mid, double p_up, double off, const double* off_arr);

    void (*axpy)(double* y, const double* x, std::size_t n, double a);      // y[i] += a*x[i]
    void (*affine)(double* out, const double* x, std::size_t n, double a, double b);  // a*x[i]+b
    void (*lincomb2)(double* out, const double* x, const double* y, std::size_t n, double a,
                     double b);  // a*x[i]+b*y[i]

    // x[i] = x[i] + b[i]*dt + h[i]*qv + s[i]*dw[i]
    void (*euler_update)(double* x, const double* b, const double* h, const double* s,
                         const double* dw, std::size_t n, double dt, double qv);

    void (*abs_diff)(double* out, const double* x, const double* y, std::size_t n);
    void (*sq_diff)(double* out, const double* x, const double* y, std::size_t n);

    double (*sum)(const double* x, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    double (*max)(const double* x, std::size_t n);  // -inf for n == 0
    double (*sum_abs_diff)(const double* x, const double* y, std::size_t n);
    double (*sum_sq_diff)(const double* x, const double* y, std::size_t n);
    double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
};

const KernelTable& table_for(Isa isa);  // throws ValidationError if unsupported
const KernelTable& table();             // active table
Isa active_isa();
void force_isa(Isa isa);
bool avx2_supported();
std::string isa_name(Isa isa);

}  // namespace gbmlab::kernels
