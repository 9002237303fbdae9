#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace frobsym {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Condition numbers above this are treated as singular.
inline constexpr double kMaxCondition = 1e12;

/// Dense n x n x n array. Index order is (upper, lower, lower) wherever a
/// tensor carries one contravariant index: T(i, j, k) = T^i_jk.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(std::size_t n, double fill = 0.0) : n_(n), data_(n * n * n, fill) {}

    std::size_t dim() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * n_ + j) * n_ + k]; }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[(i * n_ + j) * n_ + k]; }

    const std::vector<double>& data() const noexcept { return data_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    Tensor3& operator+=(const Tensor3& o) {
        require_same_size(n_, o.n_, "Tensor3 sum");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Tensor3& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }
    friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
    friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a += b * -1.0; }
    friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
    friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

    /// max |T(i,j,k) - T(i,k,j)|
    double lower_antisymmetry() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k) m = std::max(m, std::abs((*this)(i, j, k) - (*this)(i, k, j)));
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Raise the first index with `inverse`: R^i_jk = inv^{il} T_ljk.
inline Tensor3 raise_first(const Matrix& inverse, const Tensor3& lowered) {
    const std::size_t n = lowered.dim();
    Tensor3 out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double s = 0.0;
                for (std::size_t l = 0; l < n; ++l) s += inverse(i, l) * lowered(l, j, k);
                out(i, j, k) = s;
            }
    return out;
}

/// Inverse of the lowering: T_ljk = metric_lm R^m_jk.
inline Tensor3 lower_first(const Matrix& metric, const Tensor3& raised) { return raise_first(metric, raised); }

inline double condition_number(const Matrix& m) {
    if (m.size() == 0) return 1.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (smax == 0.0) return std::numeric_limits<double>::infinity();
    return smin == 0.0 ? std::numeric_limits<double>::infinity() : smax / smin;
}

/// Inverse of a metric-like matrix, throwing E when ill-conditioned.
template <class E = DegenerateMetric>
Matrix checked_inverse(const Matrix& m, const char* what = "matrix") {
    if (m.rows() != m.cols()) throw DimensionMismatch(std::string(what) + " is not square");
    const double cond = condition_number(m);
    if (!(cond <= kMaxCondition)) {
        throw E(std::string(what) + " has condition number " + std::to_string(cond));
    }
    return m.inverse();
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double symmetry_defect(const Matrix& m) { return max_abs(m - m.transpose()); }

inline Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

} // namespace frobsym
