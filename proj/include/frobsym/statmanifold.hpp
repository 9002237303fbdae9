#pragma once

// Finite exponential families p(w) ~ mu0(w) exp(-<beta, X(w)>) and the
// derivative tensors of their log-partition potential
//
//     Phi(beta) = ln sum_w mu0(w) exp(-sum_j beta^j X_j(w)).
//
// All moments are exact sums over the sample space.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace frobsym::stat {

class ExponentialFamily {
public:
    /// statistics(j, w) = X_j(w); base weights default to 1.
    explicit ExponentialFamily(Matrix statistics, Vector base_weights = {})
        : x_(std::move(statistics)), mu0_(std::move(base_weights)) {
        if (x_.rows() < 1 || x_.cols() < 1) throw DimensionMismatch("need n >= 1 statistics and m >= 1 outcomes");
        if (mu0_.size() == 0) mu0_ = Vector::Ones(x_.cols());
        require_same_size(static_cast<std::size_t>(mu0_.size()), static_cast<std::size_t>(x_.cols()), "base weights vs outcomes");
        if (!x_.allFinite()) throw InvariantViolation("statistics must be finite");
        if (!mu0_.allFinite() || (mu0_.array() <= 0.0).any()) throw InvariantViolation("base weights must be positive");
    }

    static ExponentialFamily bernoulli() { return ExponentialFamily(Matrix{{0.0, 1.0}}); }

    /// m outcomes, statistics X_j(w) = [w == j] for j = 1..m-1.
    static ExponentialFamily categorical(Eigen::Index m) {
        if (m < 2) throw DimensionMismatch("categorical family needs m >= 2");
        Matrix x = Matrix::Zero(m - 1, m);
        for (Eigen::Index j = 0; j < m - 1; ++j) x(j, j + 1) = 1.0;
        return ExponentialFamily(std::move(x));
    }

    Eigen::Index outcomes() const noexcept { return x_.cols(); }
    Eigen::Index statistics_count() const noexcept { return x_.rows(); }
    const Matrix& statistics() const noexcept { return x_; }
    const Vector& base_weights() const noexcept { return mu0_; }

    void check_point(const Vector& beta) const {
        require_same_size(static_cast<std::size_t>(beta.size()), static_cast<std::size_t>(x_.rows()), "parameter point vs statistics");
    }

    /// ln mu0(w) - <beta, X(w)> for every outcome.
    Vector log_weights(const Vector& beta) const {
        check_point(beta);
        return mu0_.array().log().matrix() - x_.transpose() * beta;
    }

private:
    Matrix x_;
    Vector mu0_;
};

/// Log-sum-exp with max shift.
inline double potential(const ExponentialFamily& fam, const Vector& beta) {
    const Vector lw = fam.log_weights(beta);
    const double top = lw.maxCoeff();
    return top + std::log((lw.array() - top).exp().sum());
}

inline double pairing(std::span<const double> measure, std::span<const double> f) {
    require_same_size(measure.size(), f.size(), "measure vs function");
    double s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * measure[j];
    return s;
}

inline Vector gibbs_density(const ExponentialFamily& fam, const Vector& beta) {
    const Vector lw = fam.log_weights(beta);
    const double top = lw.maxCoeff();
    Vector p = (lw.array() - top).exp().matrix();
    return p / p.sum();
}

/// Fully symmetric array of shape n^k, k in 1..4.
class CumulantTensor {
public:
    CumulantTensor(std::size_t order, std::size_t dim) : order_(order), dim_(dim) {
        if (order < 1 || order > 4) throw DimensionMismatch("cumulant order must be in 1..4");
        std::size_t size = 1;
        for (std::size_t i = 0; i < order; ++i) size *= dim;
        data_.assign(size, 0.0);
    }

    std::size_t order() const noexcept { return order_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<double>& data() const noexcept { return data_; }

    double& at(std::span<const std::size_t> idx) { return data_[flat(idx)]; }
    double at(std::span<const std::size_t> idx) const { return data_[flat(idx)]; }

    template <class... I>
    double operator()(I... idx) const {
        const std::array<std::size_t, sizeof...(I)> a{static_cast<std::size_t>(idx)...};
        return at(a);
    }

    /// Order-3 tensors as Tensor3; order-2 as a matrix.
    Tensor3 as_tensor3() const {
        if (order_ != 3) throw DimensionMismatch("not an order-3 tensor");
        Tensor3 t(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                for (std::size_t k = 0; k < dim_; ++k) t(i, j, k) = (*this)(i, j, k);
        return t;
    }
    Matrix as_matrix() const {
        if (order_ != 2) throw DimensionMismatch("not an order-2 tensor");
        Matrix m(dim_, dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    /// Visit every multi-index in row-major order.
    template <class F>
    void for_each_index(F&& f) const {
        std::vector<std::size_t> idx(order_, 0);
        for (std::size_t flat_i = 0; flat_i < data_.size(); ++flat_i) {
            std::size_t r = flat_i;
            for (std::size_t p = order_; p-- > 0;) {
                idx[p] = r % dim_;
                r /= dim_;
            }
            f(std::span<const std::size_t>(idx));
        }
    }

private:
    std::size_t flat(std::span<const std::size_t> idx) const {
        if (idx.size() != order_) throw DimensionMismatch("index arity differs from tensor order");
        std::size_t f = 0;
        for (std::size_t i : idx) f = f * dim_ + i;
        return f;
    }

    std::size_t order_;
    std::size_t dim_;
    std::vector<double> data_;
};

/// k-th derivative tensor of the potential at beta, from central moments of X
/// under the Gibbs density. Because the exponent carries -beta, the k-th
/// derivative equals (-1)^k times the k-th cumulant.
inline CumulantTensor cumulant_tensor(const ExponentialFamily& fam, const Vector& beta, std::size_t k) {
    const Vector p = gibbs_density(fam, beta);
    const Matrix& x = fam.statistics();
    const auto n = static_cast<std::size_t>(x.rows());
    const Vector mean = x * p;
    const Matrix c = x.colwise() - mean; // centred statistics, n x m
    CumulantTensor t(k, n);

    auto moment = [&](std::span<const std::size_t> idx) {
        double s = 0.0;
        for (Eigen::Index w = 0; w < x.cols(); ++w) {
            double prod = p(w);
            for (std::size_t i : idx) prod *= c(static_cast<Eigen::Index>(i), w);
            s += prod;
        }
        return s;
    };

    Matrix cov;
    if (k == 4) cov = c * p.asDiagonal() * c.transpose();

    // Every entry is evaluated on its sorted multi-index, so the tensor is
    // symmetric bit for bit.
    t.for_each_index([&](std::span<const std::size_t> raw) {
        std::array<std::size_t, 4> sorted{};
        std::copy(raw.begin(), raw.end(), sorted.begin());
        std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(raw.size()));
        const std::span<const std::size_t> idx(sorted.data(), raw.size());
        double v = 0.0;
        switch (k) {
        case 1: v = -mean(static_cast<Eigen::Index>(idx[0])); break;
        case 2: v = moment(idx); break;
        case 3: v = -moment(idx); break;
        case 4: {
            const auto i = static_cast<Eigen::Index>(idx[0]), j = static_cast<Eigen::Index>(idx[1]),
                       l = static_cast<Eigen::Index>(idx[2]), m = static_cast<Eigen::Index>(idx[3]);
            v = moment(idx) - cov(i, j) * cov(l, m) - cov(i, l) * cov(j, m) - cov(i, m) * cov(j, l);
            break;
        }
        default: break;
        }
        t.at(raw) = v;
    });
    return t;
}

/// Fisher metric: the Hessian of the potential.
inline Matrix fisher_metric(const ExponentialFamily& fam, const Vector& beta) {
    return cumulant_tensor(fam, beta, 2).as_matrix();
}

struct DualCoordinates {
    Vector eta;  ///< gradient of the potential, eta_j = -E[X_j]
    double psi;  ///< dual potential <beta, eta> - Phi(beta)
};

inline DualCoordinates dual_coordinates(const ExponentialFamily& fam, const Vector& beta) {
    const Matrix g = fisher_metric(fam, beta);
    if (!(condition_number(g) <= kMaxCondition)) throw DegenerateMetric("Fisher metric is singular at beta");
    Vector eta = -(fam.statistics() * gibbs_density(fam, beta));
    const double psi = beta.dot(eta) - potential(fam, beta);
    return {std::move(eta), psi};
}

/// Inverse Legendre map: solve grad Phi(beta) = eta by damped Newton.
inline Vector natural_from_dual(const ExponentialFamily& fam, const Vector& eta, Vector beta0 = {},
                                double tol = 1e-13, int max_iter = 200) {
    const Eigen::Index n = fam.statistics_count();
    require_same_size(static_cast<std::size_t>(eta.size()), static_cast<std::size_t>(n), "dual point vs statistics");
    Vector beta = beta0.size() == n ? std::move(beta0) : Vector::Zero(n);
    auto resid = [&](const Vector& b) { return Vector(-(fam.statistics() * gibbs_density(fam, b)) - eta); };
    Vector r = resid(beta);
    for (int it = 0; it < max_iter; ++it) {
        if (r.lpNorm<Eigen::Infinity>() <= tol) return beta;
        const Matrix g = fisher_metric(fam, beta);
        if (!(condition_number(g) <= kMaxCondition)) throw DegenerateMetric("Fisher metric singular during Newton solve");
        const Vector step = g.ldlt().solve(r);
        double t = 1.0;
        for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
            const Vector trial = beta - t * step;
            const Vector rt = resid(trial);
            if (rt.norm() < r.norm() || ls == 59) {
                beta = trial;
                r = rt;
                break;
            }
        }
    }
    if (r.lpNorm<Eigen::Infinity>() <= 1e3 * tol) return beta;
    throw NonConvergence("dual-to-natural Newton iteration did not converge");
}

/// Dual potential as a function of eta (through the inverse Legendre map).
inline double dual_potential(const ExponentialFamily& fam, const Vector& eta, const Vector& beta_hint = {}) {
    const Vector beta = natural_from_dual(fam, eta, beta_hint);
    return beta.dot(eta) - potential(fam, beta);
}

} // namespace frobsym::stat
