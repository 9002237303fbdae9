#pragma once

// Metric fields, Levi-Civita connections and curvature residuals, Hessian
// (cone) metrics g_ij = d_i d_j ln phi with their tangent multiplication, dual
// connections of exponential families, and flat pencils of metrics.
//
// Evaluable fields must be re-entrant: checks may call them from several
// threads at once.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "finite_diff.hpp"
#include "linalg.hpp"
#include "statmanifold.hpp"

namespace frobsym::geo {

/// Point -> symmetric matrix, with an optional analytic first-derivative
/// callback returning {d_0 g, ..., d_{n-1} g}.
class MetricField {
public:
    using Eval = std::function<Matrix(const Vector&)>;
    using Derivative = std::function<std::vector<Matrix>(const Vector&)>;

    MetricField(Eigen::Index dim, Eval eval, Derivative derivative = {}, FdSteps steps = {})
        : dim_(dim), eval_(std::move(eval)), derivative_(std::move(derivative)), steps_(steps) {
        if (dim_ < 1) throw DimensionMismatch("metric dimension must be positive");
    }

    static MetricField constant(const Matrix& g) {
        const Eigen::Index n = g.rows();
        return MetricField(n, [g](const Vector&) { return g; },
                           [n](const Vector&) { return std::vector<Matrix>(static_cast<std::size_t>(n), Matrix::Zero(n, n)); });
    }

    Eigen::Index dim() const noexcept { return dim_; }
    const FdSteps& steps() const noexcept { return steps_; }
    bool has_analytic_derivative() const noexcept { return static_cast<bool>(derivative_); }

    Matrix operator()(const Vector& x) const {
        require_same_size(static_cast<std::size_t>(x.size()), static_cast<std::size_t>(dim_), "point vs metric dimension");
        Matrix g = eval_(x);
        if (g.rows() != dim_ || g.cols() != dim_) throw DimensionMismatch("metric callback returned wrong shape");
        if (symmetry_defect(g) > 1e-12 * std::max(1.0, max_abs(g))) throw InvariantViolation("metric is not symmetric");
        return g;
    }

    std::vector<Matrix> derivatives(const Vector& x) const {
        if (derivative_) return derivative_(x);
        std::vector<Matrix> d;
        d.reserve(static_cast<std::size_t>(dim_));
        auto f = [this](const Vector& y) { return (*this)(y); };
        for (Eigen::Index l = 0; l < dim_; ++l) d.push_back(fd::partial(f, x, l, fd::scaled_step(steps_.first, x(l))));
        return d;
    }

    Matrix inverse(const Vector& x) const { return checked_inverse((*this)(x), "metric"); }

private:
    Eigen::Index dim_;
    Eval eval_;
    Derivative derivative_;
    FdSteps steps_;
};

/// Scalar field with optional analytic derivatives up to third order and a
/// domain predicate (defaults to "value > 0").
class PotentialField {
public:
    using Eval = std::function<double(const Vector&)>;
    using Gradient = std::function<Vector(const Vector&)>;
    using Hessian = std::function<Matrix(const Vector&)>;
    using Third = std::function<Tensor3(const Vector&)>;
    using Domain = std::function<bool(const Vector&)>;

    PotentialField(Eigen::Index dim, Eval eval, FdSteps steps = {}) : dim_(dim), eval_(std::move(eval)), steps_(steps) {
        if (dim_ < 1) throw DimensionMismatch("potential dimension must be positive");
    }

    PotentialField& with_gradient(Gradient g) { gradient_ = std::move(g); return *this; }
    PotentialField& with_hessian(Hessian h) { hessian_ = std::move(h); return *this; }
    PotentialField& with_third(Third t) { third_ = std::move(t); return *this; }
    PotentialField& with_domain(Domain d) { domain_ = std::move(d); return *this; }
    PotentialField& with_steps(FdSteps s) { steps_ = s; return *this; }

    Eigen::Index dim() const noexcept { return dim_; }
    const FdSteps& steps() const noexcept { return steps_; }
    bool has_gradient() const noexcept { return static_cast<bool>(gradient_); }
    bool has_hessian() const noexcept { return static_cast<bool>(hessian_); }
    bool has_third() const noexcept { return static_cast<bool>(third_); }

    double operator()(const Vector& x) const {
        require_same_size(static_cast<std::size_t>(x.size()), static_cast<std::size_t>(dim_), "point vs potential dimension");
        return eval_(x);
    }

    bool contains(const Vector& x) const {
        if (x.size() != dim_ || !x.allFinite()) return false;
        if (domain_) return domain_(x);
        return eval_(x) > 0.0;
    }

    Vector gradient(const Vector& x) const {
        if (gradient_) return gradient_(x);
        return fd::gradient(eval_, x, steps_.first);
    }
    Matrix hessian(const Vector& x) const {
        if (hessian_) return hessian_(x);
        if (gradient_) {
            Matrix h(dim_, dim_);
            for (Eigen::Index i = 0; i < dim_; ++i) h.col(i) = fd::partial(gradient_, x, i, fd::scaled_step(steps_.first, x(i)));
            return 0.5 * (h + h.transpose());
        }
        return fd::hessian(eval_, x, steps_.second);
    }
    Tensor3 third(const Vector& x) const {
        if (third_) return third_(x);
        if (hessian_) {
            const auto n = static_cast<std::size_t>(dim_);
            Tensor3 t(n);
            for (std::size_t k = 0; k < n; ++k) {
                const auto ki = static_cast<Eigen::Index>(k);
                const Matrix dk = fd::partial(hessian_, x, ki, fd::scaled_step(steps_.second, x(ki)));
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) t(k, i, j) = dk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
            return t;
        }
        return fd::third_derivatives(eval_, x, steps_.third);
    }

private:
    Eigen::Index dim_;
    Eval eval_;
    Gradient gradient_;
    Hessian hessian_;
    Third third_;
    Domain domain_;
    FdSteps steps_;
};

/// Gamma(i, j, k) = Gamma^i_jk.
using Christoffel = Tensor3;

/// Levi-Civita symbols 1/2 g^il (d_j g_lk + d_k g_jl - d_l g_jk).
inline Christoffel christoffel(const MetricField& metric, const Vector& x) {
    const Matrix ginv = metric.inverse(x);
    const auto dg = metric.derivatives(x);
    const auto n = static_cast<std::size_t>(metric.dim());
    Tensor3 lowered(n);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const auto L = static_cast<Eigen::Index>(l), J = static_cast<Eigen::Index>(j), K = static_cast<Eigen::Index>(k);
                lowered(l, j, k) = 0.5 * (dg[j](L, K) + dg[k](J, L) - dg[l](J, K));
            }
    return raise_first(ginv, lowered);
}

/// R^i_jkl stored densely.
class Riemann {
public:
    explicit Riemann(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}
    double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) { return data_[((i * n_ + j) * n_ + k) * n_ + l]; }
    double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const { return data_[((i * n_ + j) * n_ + k) * n_ + l]; }
    std::size_t dim() const noexcept { return n_; }
    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t n_;
    std::vector<double> data_;
};

using ConnectionField = std::function<Christoffel(const Vector&)>;

/// R^i_jkl = d_k G^i_lj - d_l G^i_kj + G^i_km G^m_lj - G^i_lm G^m_kj, with the
/// connection differentiated numerically using step `rel`.
inline Riemann curvature(const ConnectionField& gamma, const Vector& x, double rel) {
    const auto n = static_cast<std::size_t>(x.size());
    const Christoffel g0 = gamma(x);
    std::vector<Christoffel> dg;
    dg.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto K = static_cast<Eigen::Index>(k);
        dg.push_back(fd::partial(gamma, x, K, fd::scaled_step(rel, x(K))));
    }
    Riemann r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    double v = dg[k](i, l, j) - dg[l](i, k, j);
                    for (std::size_t m = 0; m < n; ++m) v += g0(i, k, m) * g0(m, l, j) - g0(i, l, m) * g0(m, k, j);
                    r(i, j, k, l) = v;
                }
    return r;
}

struct CurvatureReport {
    double max_riemann = 0.0;
    double max_torsion = 0.0;
    double tolerance = 0.0;
    bool flat = true;
};

inline constexpr double kCurvatureTolerance = 1e-6;

inline CurvatureReport curvature_flatness(const MetricField& metric, const std::vector<Vector>& samples,
                                          double tol = kCurvatureTolerance) {
    CurvatureReport rep;
    rep.tolerance = tol;
    const ConnectionField gamma = [&metric](const Vector& y) { return christoffel(metric, y); };
    for (const auto& x : samples) {
        rep.max_riemann = std::max(rep.max_riemann, curvature(gamma, x, metric.steps().second).max_abs());
        rep.max_torsion = std::max(rep.max_torsion, christoffel(metric, x).lower_antisymmetry());
    }
    rep.flat = rep.max_riemann <= tol;
    return rep;
}

/// max_{k,i,j} |d_k g_ij - G^l_ki g_lj - G^l_kj g_il|, with d_k g taken by
/// finite differences of the metric values.
inline double metric_compatibility_residual(const MetricField& metric, const Vector& x) {
    const Matrix g = metric(x);
    const Christoffel gam = christoffel(metric, x);
    const auto n = static_cast<std::size_t>(metric.dim());
    auto f = [&metric](const Vector& y) { return metric(y); };
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto K = static_cast<Eigen::Index>(k);
        const Matrix dk = fd::partial(f, x, K, fd::scaled_step(metric.steps().first, x(K)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double v = dk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                for (std::size_t l = 0; l < n; ++l) {
                    const auto L = static_cast<Eigen::Index>(l);
                    v -= gam(l, k, i) * g(L, static_cast<Eigen::Index>(j)) + gam(l, k, j) * g(static_cast<Eigen::Index>(i), L);
                }
                worst = std::max(worst, std::abs(v));
            }
    }
    return worst;
}

namespace detail {
inline void require_positive(const PotentialField& phi, const Vector& x) {
    if (!phi.contains(x)) throw NonPositivePotential("point lies outside the positivity domain");
    if (!(phi(x) > 0.0)) throw NonPositivePotential("potential is not positive at the probed point");
}
} // namespace detail

/// Relative step for third derivatives of ln phi, whose higher derivatives
/// grow quickly near the cone boundary.
inline constexpr double kLogThirdStep = 2.5e-3;

/// Metric g_ij = d_i d_j ln phi. Uses the analytic derivatives of phi when
/// present (through the chain rule for ln), finite differences otherwise.
inline MetricField hessian_log_metric(const PotentialField& phi) {
    const Eigen::Index n = phi.dim();
    const bool analytic2 = phi.has_gradient() && phi.has_hessian();
    const bool analytic3 = analytic2 && phi.has_third();

    MetricField::Eval eval = [phi, analytic2](const Vector& x) -> Matrix {
        detail::require_positive(phi, x);
        if (analytic2) {
            const double f = phi(x);
            const Vector g = phi.gradient(x);
            return phi.hessian(x) / f - g * g.transpose() / (f * f);
        }
        const auto log_phi = [&phi](const Vector& y) { return std::log(phi(y)); };
        return fd::hessian(log_phi, x, phi.steps().second);
    };

    MetricField::Derivative deriv = [phi, n](const Vector& x) {
        detail::require_positive(phi, x);
        const auto log_phi = [&phi](const Vector& y) { return std::log(phi(y)); };
        const Tensor3 t = fd::third_derivatives(log_phi, x, kLogThirdStep);
        std::vector<Matrix> out(static_cast<std::size_t>(n), Matrix(n, n));
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    out[static_cast<std::size_t>(k)](i, j) =
                        t(static_cast<std::size_t>(k), static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        return out;
    };
    if (analytic3) {
        deriv = [phi, n](const Vector& x) {
            detail::require_positive(phi, x);
            const double f = phi(x);
            const Vector g = phi.gradient(x);
            const Matrix h = phi.hessian(x);
            const Tensor3 t = phi.third(x);
            std::vector<Matrix> out(static_cast<std::size_t>(n), Matrix(n, n));
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index i = 0; i < n; ++i)
                    for (Eigen::Index j = 0; j < n; ++j) {
                        const auto K = static_cast<std::size_t>(k), I = static_cast<std::size_t>(i), J = static_cast<std::size_t>(j);
                        out[K](i, j) = t(K, I, J) / f - (h(i, j) * g(k) + h(i, k) * g(j) + h(j, k) * g(i)) / (f * f) +
                                       2.0 * g(i) * g(j) * g(k) / (f * f * f);
                    }
            return out;
        };
    }
    return MetricField(n, std::move(eval), std::move(deriv), phi.steps());
}

/// Tangent multiplication of a cone at x: (a o b)^i = -Gamma^i_jk(x) a^j b^k.
inline Vector cone_multiply(const PotentialField& phi, const Vector& x, const Vector& a, const Vector& b) {
    require_same_size(static_cast<std::size_t>(a.size()), static_cast<std::size_t>(phi.dim()), "first factor");
    require_same_size(static_cast<std::size_t>(b.size()), static_cast<std::size_t>(phi.dim()), "second factor");
    const Christoffel gam = christoffel(hessian_log_metric(phi), x);
    const auto n = static_cast<std::size_t>(phi.dim());
    Vector out = Vector::Zero(phi.dim());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                out(static_cast<Eigen::Index>(i)) -= gam(i, j, k) * a(static_cast<Eigen::Index>(j)) * b(static_cast<Eigen::Index>(k));
    return out;
}

/// max over samples of |ln phi(Ax) - ln phi(x) + ln det A|.
inline double automorphism_invariance_residual(const PotentialField& phi, const Matrix& a, const std::vector<Vector>& samples) {
    if (a.rows() != phi.dim() || a.cols() != phi.dim()) throw DimensionMismatch("map must be n x n");
    const double det = a.determinant();
    if (!(det > 0.0)) throw DomainViolation("map must have positive determinant");
    double worst = 0.0;
    for (const auto& x : samples) {
        if (!phi.contains(x)) throw DomainViolation("sample lies outside the domain");
        const Vector ax = a * x;
        if (!phi.contains(ax)) throw DomainViolation("image of a sample leaves the positivity domain");
        worst = std::max(worst, std::abs(std::log(phi(ax)) - std::log(phi(x)) + std::log(det)));
    }
    return worst;
}

/// Fisher metric of a family as a field over beta, with the analytic
/// derivative d_k g_ij = (third derivative of the potential)_kij.
inline MetricField fisher_metric_field(const stat::ExponentialFamily& fam, FdSteps steps = {}) {
    const Eigen::Index n = fam.statistics_count();
    return MetricField(
        n, [fam](const Vector& b) { return stat::fisher_metric(fam, b); },
        [fam, n](const Vector& b) {
            const auto t = stat::cumulant_tensor(fam, b, 3);
            std::vector<Matrix> out(static_cast<std::size_t>(n), Matrix(n, n));
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index i = 0; i < n; ++i)
                    for (Eigen::Index j = 0; j < n; ++j) out[static_cast<std::size_t>(k)](i, j) = t(k, i, j);
            return out;
        },
        steps);
}

struct DualConnections {
    Christoffel levi_civita;
    Christoffel exponential; ///< Gamma_LC - 1/2 g^-1 T
    Christoffel mixture;     ///< Gamma_LC + 1/2 g^-1 T
    double duality_residual = 0.0;
    double exponential_curvature = 0.0;
    double mixture_curvature = 0.0;
};

/// alpha = +-1 connections of an exponential family in beta coordinates, with
/// T the third derivative tensor of the potential.
inline DualConnections dual_connections(const stat::ExponentialFamily& fam, const Vector& beta, FdSteps steps = {}) {
    const MetricField g = fisher_metric_field(fam, steps);
    auto pair_at = [&fam, &g](const Vector& b) {
        const Matrix ginv = g.inverse(b);
        const Christoffel lc = christoffel(g, b);
        const Christoffel half_t = raise_first(ginv, stat::cumulant_tensor(fam, b, 3).as_tensor3()) * 0.5;
        return std::array<Christoffel, 3>{lc, lc - half_t, lc + half_t};
    };
    const auto [lc, ex, mx] = pair_at(beta);

    DualConnections out{lc, ex, mx};
    const Matrix gm = g(beta);
    const Tensor3 ex_low = lower_first(gm, ex); // ex_low(j, k, i) = Gamma^(e)_{ki,j}
    const Tensor3 mx_low = lower_first(gm, mx);
    const auto n = static_cast<std::size_t>(g.dim());
    auto values = [&g](const Vector& b) { return g(b); };
    for (std::size_t k = 0; k < n; ++k) {
        const auto K = static_cast<Eigen::Index>(k);
        const Matrix dk = fd::partial(values, beta, K, fd::scaled_step(steps.first, beta(K)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double r = dk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - (ex_low(j, k, i) + mx_low(i, k, j));
                out.duality_residual = std::max(out.duality_residual, std::abs(r));
            }
    }
    out.exponential_curvature = curvature([&](const Vector& b) { return pair_at(b)[1]; }, beta, steps.second).max_abs();
    out.mixture_curvature = curvature([&](const Vector& b) { return pair_at(b)[2]; }, beta, steps.second).max_abs();
    return out;
}

/// Covariant metric field of a contravariant one: g = G^-1, d g = -G^-1 dG G^-1.
inline MetricField lower_indices(const MetricField& contravariant) {
    const Eigen::Index n = contravariant.dim();
    return MetricField(
        n, [contravariant](const Vector& x) {
            Matrix inv = contravariant.inverse(x);
            return Matrix(0.5 * (inv + inv.transpose()));
        },
        [contravariant](const Vector& x) {
            const Matrix inv = contravariant.inverse(x);
            auto d = contravariant.derivatives(x);
            for (auto& m : d) m = -inv * m * inv;
            return d;
        },
        contravariant.steps());
}

struct PencilReport {
    double residual_metric = 0.0;
    double residual_derivative = 0.0;
    std::vector<std::pair<double, double>> residual_combinations; ///< (lambda, residual)
    double tolerance = 0.0;
    bool pass = false;

    double worst() const {
        double w = std::max(residual_metric, residual_derivative);
        for (const auto& [lam, r] : residual_combinations) w = std::max(w, r);
        return w;
    }
};

/// Checks that g^ij, g2^ij = d g^ij / d x^direction and every sampled
/// g + lambda g2 are flat. Fields derived by differentiation use the
/// second-derivative step.
inline PencilReport flat_pencil_check(const MetricField& contravariant, Eigen::Index direction, const std::vector<double>& lambdas,
                                      const std::vector<Vector>& samples, double tol = kCurvatureTolerance) {
    if (direction < 0 || direction >= contravariant.dim()) throw DimensionMismatch("pencil direction out of range");
    const Eigen::Index n = contravariant.dim();
    FdSteps derived_steps = contravariant.steps();
    derived_steps.first = derived_steps.second;

    auto g2_at = [contravariant, direction](const Vector& x) -> Matrix {
        return contravariant.derivatives(x)[static_cast<std::size_t>(direction)];
    };
    for (const auto& x : samples) {
        const Matrix g2 = g2_at(x);
        if (max_abs(g2) == 0.0 || !(condition_number(g2) <= kMaxCondition)) {
            throw DegeneratePencil("derivative metric is degenerate at a sample point");
        }
    }

    const MetricField g2_field(n, g2_at, {}, derived_steps);
    auto flatness = [&](const MetricField& contra) {
        return curvature_flatness(lower_indices(contra), samples, tol).max_riemann;
    };

    PencilReport rep;
    rep.tolerance = tol;
    rep.residual_metric = flatness(contravariant);
    rep.residual_derivative = flatness(g2_field);
    for (double lam : lambdas) {
        const MetricField combo(
            n, [contravariant, g2_at, lam](const Vector& x) { return Matrix(contravariant(x) + lam * g2_at(x)); },
            [contravariant, g2_field, lam](const Vector& x) {
                auto d = contravariant.derivatives(x);
                const auto d2 = g2_field.derivatives(x);
                for (std::size_t l = 0; l < d.size(); ++l) d[l] += lam * d2[l];
                return d;
            },
            derived_steps);
        rep.residual_combinations.emplace_back(lam, flatness(combo));
    }
    rep.pass = rep.worst() <= tol;
    return rep;
}

} // namespace frobsym::geo
