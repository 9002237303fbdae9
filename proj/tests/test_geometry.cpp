#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frobsym/geometry.hpp"

using namespace frobsym;
using geo::MetricField;
using geo::PotentialField;

namespace {

MetricField sphere() {
    return MetricField(2, [](const Vector& u) {
        Matrix g = Matrix::Zero(2, 2);
        g(0, 0) = 1.0;
        g(1, 1) = std::sin(u(0)) * std::sin(u(0));
        return g;
    });
}

MetricField orthant_metric(Eigen::Index n) {
    return MetricField(n, [](const Vector& x) { return Matrix(x.array().square().inverse().matrix().asDiagonal()); });
}

/// phi = 1 / (x_1 ... x_n) on the positive orthant.
PotentialField orthant(Eigen::Index n) {
    return PotentialField(n, [](const Vector& x) { return 1.0 / x.prod(); })
        .with_domain([](const Vector& x) { return (x.array() > 0.0).all(); });
}

std::vector<Vector> orthant_samples(Eigen::Index n) {
    std::vector<Vector> s;
    for (double t : {0.5, 1.0, 2.3}) {
        Vector x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = t + 0.4 * static_cast<double>(i);
        s.push_back(x);
    }
    return s;
}

} // namespace

TEST(Christoffel, EuclideanVanishes) {
    for (Eigen::Index n : {1, 2, 4}) {
        const auto g = MetricField::constant(Matrix::Identity(n, n));
        EXPECT_EQ(geo::christoffel(g, Vector::Random(n)).max_abs(), 0.0);
    }
}

TEST(Christoffel, OrthantMetric) {
    const Vector x{{1.0, 2.0}};
    const auto gam = geo::christoffel(orthant_metric(2), x);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) {
                const double expected = (i == j && j == k) ? -1.0 / x(static_cast<Eigen::Index>(i)) : 0.0;
                EXPECT_NEAR(gam(i, j, k), expected, 1e-9);
            }
}

TEST(Christoffel, SphereOracle) {
    const auto gam = geo::christoffel(sphere(), Vector{{1.0, 0.5}});
    EXPECT_NEAR(gam(0, 1, 1), -0.45464871341284084770, 1e-9);
    EXPECT_NEAR(gam(1, 0, 1), 0.64209261593433070301, 1e-9);
    EXPECT_EQ(gam(1, 0, 1), gam(1, 1, 0));
}

TEST(Christoffel, DegenerateMetric) {
    EXPECT_THROW(geo::christoffel(MetricField::constant(Matrix::Zero(2, 2)), Vector::Zero(2)), DegenerateMetric);
}

TEST(Christoffel, MetricCompatibility) {
    EXPECT_LT(geo::metric_compatibility_residual(sphere(), Vector{{1.0, 0.5}}), 1e-6);
    EXPECT_LT(geo::metric_compatibility_residual(orthant_metric(3), Vector{{1.0, 2.0, 0.7}}), 1e-6);
}

TEST(Curvature, FlatAndCurved) {
    const auto euclid = geo::curvature_flatness(MetricField::constant(Matrix::Identity(3, 3)), {Vector::Ones(3)});
    EXPECT_TRUE(euclid.flat);
    EXPECT_EQ(euclid.max_riemann, 0.0);

    const auto orth = geo::curvature_flatness(orthant_metric(2), orthant_samples(2));
    EXPECT_TRUE(orth.flat);
    EXPECT_LT(orth.max_riemann, 1e-6);
    EXPECT_LT(orth.max_torsion, 1e-15);

    const auto sph = geo::curvature_flatness(sphere(), {Vector{{1.0, 0.5}}});
    EXPECT_FALSE(sph.flat);
    EXPECT_GT(sph.max_riemann, 0.1);
}

TEST(Curvature, ClassificationSurvivesDiffeomorphism) {
    // Euclidean metric pulled back by x -> (x1, x2 + x1^2): still flat, curvilinear.
    const MetricField pulled(2, [](const Vector& x) {
        Matrix j{{1.0, 0.0}, {2.0 * x(0), 1.0}};
        return Matrix(j.transpose() * j);
    });
    EXPECT_TRUE(geo::curvature_flatness(pulled, {Vector{{0.3, -0.2}}, Vector{{1.1, 0.4}}}).flat);
    // Sphere in coordinates (v, w) = (u1 + 0.1 u2, u2).
    const MetricField sph2(2, [](const Vector& y) {
        const Vector u{{y(0) - 0.1 * y(1), y(1)}};
        Matrix j{{1.0, -0.1}, {0.0, 1.0}};
        Matrix g = Matrix::Zero(2, 2);
        g(0, 0) = 1.0;
        g(1, 1) = std::sin(u(0)) * std::sin(u(0));
        return Matrix(j.transpose() * g * j);
    });
    EXPECT_FALSE(geo::curvature_flatness(sph2, {Vector{{1.05, 0.5}}}).flat);
}

TEST(HessianLog, OrthantValue) {
    const Matrix g = geo::hessian_log_metric(orthant(2))(Vector{{1.0, 2.0}});
    EXPECT_NEAR(g(0, 0), 1.0, 1e-7);
    EXPECT_NEAR(g(1, 1), 0.25, 1e-7);
    EXPECT_NEAR(g(0, 1), 0.0, 1e-7);
}

TEST(HessianLog, ExponentialOfQuadratic) {
    const Matrix q{{1.0, 0.3}, {0.3, 2.0}};
    const PotentialField phi(2, [q](const Vector& x) { return std::exp(0.5 * x.dot(q * x)); });
    const Matrix g = geo::hessian_log_metric(phi)(Vector{{0.2, -0.4}});
    EXPECT_LT(max_abs(g - q), 1e-7);
}

TEST(HessianLog, PositiveDefiniteOnOrthant) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    const auto g = geo::hessian_log_metric(orthant(3));
    for (int i = 0; i < 10; ++i) {
        const Vector x{{u(rng), u(rng), u(rng)}};
        Eigen::SelfAdjointEigenSolver<Matrix> es(g(x));
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    }
}

TEST(HessianLog, ScaleInvariant) {
    const auto base = orthant(2);
    const PotentialField scaled(2, [](const Vector& x) { return 5.0 / x.prod(); });
    const Vector x{{0.7, 1.9}};
    EXPECT_LT(max_abs(geo::hessian_log_metric(base)(x) - geo::hessian_log_metric(scaled)(x)), 1e-8);
}

TEST(HessianLog, NonPositive) {
    const PotentialField phi(1, [](const Vector& x) { return x(0); });
    EXPECT_THROW(geo::hessian_log_metric(phi)(Vector::Constant(1, -1.0)), NonPositivePotential);
}

TEST(HessianLog, AnalyticDerivativesAgreeWithFd) {
    auto phi = orthant(2);
    phi.with_gradient([](const Vector& x) { return Vector(-x.array().inverse() / x.prod()); })
        .with_hessian([](const Vector& x) {
            const Vector r = x.array().inverse();
            Matrix h = r * r.transpose();
            h.diagonal() = 2.0 * r.array().square();
            return Matrix(h / x.prod());
        });
    const Vector x{{1.3, 0.6}};
    EXPECT_LT(max_abs(geo::hessian_log_metric(phi)(x) - geo::hessian_log_metric(orthant(2))(x)), 1e-7);
}

TEST(Cone, Multiplication) {
    const auto phi = orthant(2);
    const Vector x{{1.0, 2.0}};
    EXPECT_LT((geo::cone_multiply(phi, x, Vector{{1.0, 0.0}}, Vector{{1.0, 0.0}}) - Vector{{1.0, 0.0}}).norm(), 1e-8);
    const Vector a{{0.3, -0.7}};
    EXPECT_LT((geo::cone_multiply(phi, x, x, a) - a).norm(), 1e-8);
    const Vector b{{-1.2, 0.4}};
    EXPECT_LT((geo::cone_multiply(phi, x, 2.0 * a, b) - 2.0 * geo::cone_multiply(phi, x, a, b)).norm(), 1e-12);
    EXPECT_LT((geo::cone_multiply(phi, x, a, b) - geo::cone_multiply(phi, x, b, a)).norm(), 1e-12);
}

TEST(Cone, AutomorphismInvariance) {
    const auto phi = orthant(2);
    const auto samples = orthant_samples(2);
    EXPECT_NEAR(geo::automorphism_invariance_residual(phi, Matrix{{2.0, 0.0}, {0.0, 3.0}}, samples), 0.0, 1e-14);
    EXPECT_EQ(geo::automorphism_invariance_residual(phi, Matrix::Identity(2, 2), samples), 0.0);
    EXPECT_GT(geo::automorphism_invariance_residual(phi, Matrix{{1.0, 1.0}, {0.0, 1.0}}, {Vector::Ones(2)}), 0.1);
}

TEST(Cone, AutomorphismDomainErrors) {
    const auto phi = orthant(2);
    EXPECT_THROW(geo::automorphism_invariance_residual(phi, Matrix{{1.0, -3.0}, {0.0, 1.0}}, {Vector::Ones(2)}), DomainViolation);
    EXPECT_THROW(geo::automorphism_invariance_residual(phi, Matrix{{-1.0, 0.0}, {0.0, 1.0}}, {Vector::Ones(2)}), DomainViolation);
}

TEST(DualConnections, Bernoulli) {
    const auto d = geo::dual_connections(stat::ExponentialFamily::bernoulli(), Vector::Constant(1, 0.5));
    EXPECT_LT(d.duality_residual, 1e-6);
    EXPECT_LT(d.exponential_curvature, 1e-6);
    EXPECT_LT(d.mixture_curvature, 1e-6);
    EXPECT_NEAR(0.5 * (d.exponential(0, 0, 0) + d.mixture(0, 0, 0)), d.levi_civita(0, 0, 0), 1e-15);
}

TEST(DualConnections, Categorical3) {
    const auto d = geo::dual_connections(stat::ExponentialFamily::categorical(3), Vector{{0.3, -0.2}});
    EXPECT_LT(d.duality_residual, 1e-6);
    EXPECT_LT(d.exponential_curvature, 1e-6);
    EXPECT_LT(d.mixture_curvature, 1e-6);
    EXPECT_LT(d.exponential.max_abs(), 1e-6);
}

TEST(DualConnections, VanishingSkewness) {
    // Symmetric statistics at beta = 0 have zero third cumulant.
    const auto d = geo::dual_connections(stat::ExponentialFamily(Matrix{{-1.0, 0.0, 1.0}}), Vector::Zero(1));
    EXPECT_NEAR(d.exponential(0, 0, 0), d.levi_civita(0, 0, 0), 1e-15);
    EXPECT_NEAR(d.mixture(0, 0, 0), d.levi_civita(0, 0, 0), 1e-15);
}

TEST(Pencil, OneDimensional) {
    const MetricField g(1, [](const Vector& u) { return Matrix::Constant(1, 1, u(0)); });
    const auto rep = geo::flat_pencil_check(g, 0, {0.5, -0.25}, {Vector::Constant(1, 1.5)});
    EXPECT_TRUE(rep.pass);
}

TEST(Pencil, OffDiagonalLinear) {
    const MetricField g(2, [](const Vector& u) { return Matrix{{0.0, u(0)}, {u(0), 0.0}}; });
    const auto rep = geo::flat_pencil_check(g, 0, {-2.0, -0.5, 0.3, 1.0, 2.5}, {Vector{{1.5, 0.3}}, Vector{{2.2, -1.0}}});
    EXPECT_TRUE(rep.pass) << rep.worst();
    EXPECT_EQ(rep.residual_combinations.size(), 5u);
}

TEST(Pencil, ConstantMetricIsDegenerate) {
    EXPECT_THROW(geo::flat_pencil_check(MetricField::constant(Matrix::Identity(2, 2)), 0, {1.0}, {Vector::Ones(2)}),
                 DegeneratePencil);
}
