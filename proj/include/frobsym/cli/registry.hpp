#pragma once

// Named potentials, metrics and scalar fields that spec files refer to by id,
// with the sampling box used when a spec gives no explicit points.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../geometry.hpp"

namespace frobsym::cli {

/// Axis-aligned box [lo, hi] per coordinate.
struct SampleBox {
    double lo = -1.0;
    double hi = 1.0;
    std::map<Eigen::Index, std::pair<double, double>> overrides;

    std::pair<double, double> range(Eigen::Index i) const {
        const auto it = overrides.find(i);
        return it == overrides.end() ? std::pair{lo, hi} : it->second;
    }
};

struct PotentialEntry {
    std::string description;
    std::optional<Eigen::Index> fixed_dim;
    bool even_dim = false;
    SampleBox box;
    std::function<geo::PotentialField(Eigen::Index, FdSteps)> make;
};

struct MetricEntry {
    std::string description;
    std::optional<Eigen::Index> fixed_dim;
    SampleBox box;
    std::function<geo::MetricField(Eigen::Index, FdSteps)> make;
};

struct ScalarEntry {
    std::string description;
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
};

namespace detail {

inline void set_symmetric(Tensor3& t, std::size_t i, std::size_t j, std::size_t k, double v) {
    t(i, j, k) = t(i, k, j) = t(j, i, k) = t(j, k, i) = t(k, i, j) = t(k, j, i) = v;
}

/// phi = 1 / (x_1 ... x_n) with analytic derivatives through third order.
inline geo::PotentialField orthant_potential(Eigen::Index n, FdSteps steps) {
    return geo::PotentialField(n, [](const Vector& x) { return 1.0 / x.prod(); }, steps)
        .with_domain([](const Vector& x) { return (x.array() > 0.0).all(); })
        .with_gradient([](const Vector& x) { return Vector(-(1.0 / x.prod()) * x.cwiseInverse()); })
        .with_hessian([](const Vector& x) {
            const Vector inv = x.cwiseInverse();
            Matrix h = inv * inv.transpose();
            h.diagonal() *= 2.0;
            return Matrix(h / x.prod());
        })
        .with_third([](const Vector& x) {
            const auto n = static_cast<std::size_t>(x.size());
            const double phi = 1.0 / x.prod();
            Tensor3 t(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) {
                        const double dij = i == j ? 1.0 : 0.0, dik = i == k ? 1.0 : 0.0, djk = j == k ? 1.0 : 0.0;
                        const auto xi = x(static_cast<Eigen::Index>(i)), xj = x(static_cast<Eigen::Index>(j)),
                                   xk = x(static_cast<Eigen::Index>(k));
                        t(i, j, k) = -(1.0 + dij) * (1.0 + dik + djk) * phi / (xi * xj * xk);
                    }
            return t;
        });
}

/// 1/2 x1^2 x3 + 1/2 x1 x2^2 + c x2^2 x3^2; flat identity at c = 0.
inline geo::PotentialField cubic_wdvv3(double c, FdSteps steps) {
    return geo::PotentialField(
               3, [c](const Vector& x) { return 0.5 * x(0) * x(0) * x(2) + 0.5 * x(0) * x(1) * x(1) + c * x(1) * x(1) * x(2) * x(2); },
               steps)
        .with_domain([](const Vector&) { return true; })
        .with_third([c](const Vector& x) {
            Tensor3 t(3);
            set_symmetric(t, 0, 0, 2, 1.0);
            set_symmetric(t, 0, 1, 1, 1.0);
            set_symmetric(t, 1, 1, 2, 4.0 * c * x(2));
            set_symmetric(t, 1, 2, 2, 4.0 * c * x(1));
            return t;
        });
}

/// 1/2 x1^2 x2 + exp(x2).
inline geo::PotentialField unit_normal2(FdSteps steps) {
    return geo::PotentialField(2, [](const Vector& x) { return 0.5 * x(0) * x(0) * x(1) + std::exp(x(1)); }, steps)
        .with_domain([](const Vector&) { return true; })
        .with_third([](const Vector& x) {
            Tensor3 t(2);
            set_symmetric(t, 0, 0, 1, 1.0);
            t(1, 1, 1) = std::exp(x(1));
            return t;
        });
}

/// Sum_a (z+^a z-^a)^2 + sin(z+^1) sin(z-^1) in adapted coordinates; symmetric
/// under z+ <-> z-.
inline geo::PotentialField dolbeault_quartic(Eigen::Index dim, FdSteps steps) {
    const Eigen::Index m = dim / 2;
    return geo::PotentialField(
               dim,
               [m](const Vector& x) {
                   double s = std::sin(x(0)) * std::sin(x(m));
                   for (Eigen::Index a = 0; a < m; ++a) s += std::pow(x(a) * x(m + a), 2);
                   return s;
               },
               steps)
        .with_domain([](const Vector&) { return true; });
}

inline Matrix antidiagonal(Eigen::Index n) { return Matrix::Identity(n, n).rowwise().reverse(); }

} // namespace detail

inline const std::map<std::string, PotentialEntry>& potential_registry() {
    static const std::map<std::string, PotentialEntry> reg{
        {"orthant", {"1 / (x_1 ... x_n) on the positive orthant", std::nullopt, false, SampleBox{0.5, 3.0, {}},
                     [](Eigen::Index n, FdSteps s) { return detail::orthant_potential(n, s); }}},
        {"trivial_wdvv3", {"1/2 x1^2 x3 + 1/2 x1 x2^2", 3, false, SampleBox{},
                           [](Eigen::Index, FdSteps s) { return detail::cubic_wdvv3(0.0, s); }}},
        {"perturbed_wdvv3", {"trivial_wdvv3 + 0.1 x2^2 x3^2", 3, false, SampleBox{},
                             [](Eigen::Index, FdSteps s) { return detail::cubic_wdvv3(0.1, s); }}},
        {"unit_normal2", {"1/2 x1^2 x2 + exp(x2)", 2, false, SampleBox{},
                          [](Eigen::Index, FdSteps s) { return detail::unit_normal2(s); }}},
        {"dolbeault_quartic", {"sum (z+^a z-^a)^2 + sin(z+^1) sin(z-^1)", std::nullopt, true, SampleBox{},
                               [](Eigen::Index n, FdSteps s) { return detail::dolbeault_quartic(n, s); }}},
    };
    return reg;
}

inline const std::map<std::string, MetricEntry>& metric_registry() {
    static const std::map<std::string, MetricEntry> reg{
        {"euclidean", {"identity matrix", std::nullopt, SampleBox{},
                       [](Eigen::Index n, FdSteps) { return geo::MetricField::constant(Matrix::Identity(n, n)); }}},
        {"antidiagonal", {"constant antidiagonal pairing", std::nullopt, SampleBox{},
                          [](Eigen::Index n, FdSteps) { return geo::MetricField::constant(detail::antidiagonal(n)); }}},
        {"minkowski", {"diag(1, 1, 1, -1)", 4, SampleBox{},
                       [](Eigen::Index, FdSteps) { return geo::MetricField::constant(Matrix(Vector{{1.0, 1.0, 1.0, -1.0}}.asDiagonal())); }}},
        {"orthant_hessian", {"diag(1 / x_i^2), Hessian of -sum ln x_i", std::nullopt, SampleBox{0.5, 3.0, {}},
                             [](Eigen::Index n, FdSteps s) {
                                 return geo::MetricField(
                                     n, [](const Vector& x) { return Matrix(x.array().square().inverse().matrix().asDiagonal()); },
                                     [n](const Vector& x) {
                                         std::vector<Matrix> d;
                                         for (Eigen::Index l = 0; l < n; ++l) {
                                             Matrix m = Matrix::Zero(n, n);
                                             m(l, l) = -2.0 / std::pow(x(l), 3);
                                             d.push_back(m);
                                         }
                                         return d;
                                     },
                                     s);
                             }}},
        {"round_sphere", {"d theta^2 + sin^2 theta d phi^2", 2, SampleBox{-1.0, 1.0, {{0, {0.5, 2.5}}}},
                          [](Eigen::Index, FdSteps s) {
                              return geo::MetricField(
                                  2,
                                  [](const Vector& u) {
                                      Matrix g = Matrix::Zero(2, 2);
                                      g(0, 0) = 1.0;
                                      g(1, 1) = std::sin(u(0)) * std::sin(u(0));
                                      return g;
                                  },
                                  {}, s);
                          }}},
        {"offdiag_linear2", {"contravariant g^12 = u^1", 2, SampleBox{-1.0, 1.0, {{0, {0.5, 2.5}}}},
                             [](Eigen::Index, FdSteps s) {
                                 return geo::MetricField(
                                     2, [](const Vector& u) { return Matrix{{0.0, u(0)}, {u(0), 0.0}}; }, {}, s);
                             }}},
        {"linear_diagonal", {"contravariant g^ij = delta^ij u^i", std::nullopt, SampleBox{1.0, 3.0, {}},
                             [](Eigen::Index n, FdSteps s) {
                                 return geo::MetricField(
                                     n, [](const Vector& u) { return Matrix(u.asDiagonal()); },
                                     [n](const Vector&) {
                                         std::vector<Matrix> d;
                                         for (Eigen::Index l = 0; l < n; ++l) {
                                             Matrix m = Matrix::Zero(n, n);
                                             m(l, l) = 1.0;
                                             d.push_back(m);
                                         }
                                         return d;
                                     },
                                     s);
                             }}},
    };
    return reg;
}

inline const std::map<std::string, ScalarEntry>& scalar_registry() {
    static const std::map<std::string, ScalarEntry> reg{
        {"zero", {"U = 0", [](const Vector&) { return 0.0; }, [](const Vector& z) { return Vector(Vector::Zero(z.size())); }}},
        {"harmonic", {"U = 1/2 |z|^2", [](const Vector& z) { return 0.5 * z.squaredNorm(); }, [](const Vector& z) { return z; }}},
    };
    return reg;
}

template <class Map>
const typename Map::mapped_type& lookup(const Map& reg, const std::string& id, const char* what) {
    const auto it = reg.find(id);
    if (it == reg.end()) throw SchemaError(std::string(what) + ": unknown id '" + id + "'");
    return it->second;
}

} // namespace frobsym::cli
