#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "gbmlab/common.hpp"

namespace gbmlab {

// Small dense vectors/matrices for the state dimension n and noise dimension d.
// Both are tiny (1..8 in practice); the data-parallel axis of this project is
// paths/nodes, not these.
using Vecd = std::vector<double>;

class Matd {
public:
    Matd() = default;
    Matd(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
    Matd(std::size_t rows, std::size_t cols, std::initializer_list<double> vals)
        : rows_(rows), cols_(cols), a_(vals) {
        require(a_.size() == rows * cols, "Matd: initializer size mismatch");
    }

    static Matd identity(std::size_t n) {
        Matd m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::span<const double> data() const { return a_; }
    std::span<double> data() { return a_; }

    bool is_symmetric(double tol = 0.0) const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }

    bool all_finite() const {
        for (double x : a_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    // this * this^T
    Matd aat() const {
        Matd m(rows_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < rows_; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < cols_; ++k) s += (*this)(i, k) * (*this)(j, k);
                m(i, j) = s;
            }
        return m;
    }

    Vecd mul(std::span<const double> x) const {
        require(x.size() == cols_, "Matd::mul: dimension mismatch");
        Vecd y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

// trace(M A) for square M, A of the same size.
inline double trace_product(const Matd& m, const Matd& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) s += m(i, k) * a(k, i);
    return s;
}

// x^T M x
inline double quad_form(const Matd& m, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s += x[i] * m(i, j) * x[j];
    return s;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace gbmlab
