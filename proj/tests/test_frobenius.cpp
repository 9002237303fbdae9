#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frobsym/frobenius.hpp"

using namespace frobsym;
using frob::FrobeniusAlgebra;
using geo::PotentialField;

namespace {

const Matrix kAntidiagonal{{0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}};

/// 1/2 x1^2 x3 + 1/2 x1 x2^2 + c x2^2 x3^2 with analytic third derivatives.
PotentialField wdvv3(double c) {
    return PotentialField(3, [c](const Vector& x) {
               return 0.5 * x(0) * x(0) * x(2) + 0.5 * x(0) * x(1) * x(1) + c * x(1) * x(1) * x(2) * x(2);
           })
        .with_third([c](const Vector& x) {
            Tensor3 t(3);
            auto set = [&t](std::size_t i, std::size_t j, std::size_t k, double v) {
                t(i, j, k) = t(i, k, j) = t(j, i, k) = t(j, k, i) = t(k, i, j) = t(k, j, i) = v;
            };
            set(0, 0, 2, 1.0);
            set(0, 1, 1, 1.0);
            set(1, 1, 2, 4.0 * c * x(2));
            set(1, 2, 2, 4.0 * c * x(1));
            return t;
        });
}

} // namespace

TEST(AlgebraFromPotential, ZeroTensorGivesZeroAlgebra) {
    const auto alg = frob::algebra_from_potential(Tensor3(3), Matrix::Identity(3, 3));
    EXPECT_EQ(alg.constants().max_abs(), 0.0);
    const auto bern = frob::algebra_from_potential(stat::cumulant_tensor(stat::ExponentialFamily::bernoulli(), Vector::Zero(1), 3),
                                                   Matrix::Constant(1, 1, 0.25));
    EXPECT_EQ(bern.constants().max_abs(), 0.0);
}

TEST(AlgebraFromPotential, UnitOfTrivialPotential) {
    const auto alg = frob::algebra_from_potential(wdvv3(0.0).third(Vector{{0.3, -0.7, 1.1}}), kAntidiagonal);
    const auto rep = frob::frobenius_axioms(alg);
    ASSERT_TRUE(rep.unit.has_value());
    EXPECT_LT((*rep.unit - Vector{{1.0, 0.0, 0.0}}).norm(), 1e-12);
    EXPECT_LT(rep.associativity, 1e-12);
}

TEST(AlgebraFromPotential, TripleIdentity) {
    const auto fam = stat::ExponentialFamily::categorical(4);
    const Vector beta{{0.2, -0.5, 0.1}};
    const Tensor3 t = stat::cumulant_tensor(fam, beta, 3).as_tensor3();
    const Matrix g = stat::fisher_metric(fam, beta);
    const auto alg = frob::algebra_from_potential(t, g);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 20; ++trial) {
        Vector u(3), v(3), w(3);
        for (int i = 0; i < 3; ++i) {
            u(i) = n01(rng);
            v(i) = n01(rng);
            w(i) = n01(rng);
        }
        double tuvw = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t k = 0; k < 3; ++k) tuvw += t(i, j, k) * u(i) * v(j) * w(k);
        EXPECT_NEAR(alg.multiply(u, v).dot(g * w), tuvw, 1e-12);
    }
    EXPECT_LT(frob::frobenius_axioms(alg).invariance, 1e-10);
}

TEST(AlgebraFromPotential, DegenerateMetric) {
    EXPECT_THROW(frob::algebra_from_potential(Tensor3(2), Matrix::Zero(2, 2)), DegenerateMetric);
}

TEST(WDVV, TrivialPotential) {
    const auto r = frob::wdvv_residual(wdvv3(0.0), kAntidiagonal, Vector{{0.3, -0.7, 1.1}});
    EXPECT_LT(r.max_abs, 1e-8);
}

TEST(WDVV, TrivialPotentialByFiniteDifferences) {
    const PotentialField phi(3, [](const Vector& x) { return 0.5 * x(0) * x(0) * x(2) + 0.5 * x(0) * x(1) * x(1); });
    EXPECT_LT(frob::wdvv_residual(phi, kAntidiagonal, Vector{{0.3, -0.7, 1.1}}).max_abs, 1e-8);
}

TEST(WDVV, PerturbedPotential) {
    const auto r = frob::wdvv_residual(wdvv3(0.1), kAntidiagonal, Vector{{0.0, 1.0, 1.0}});
    EXPECT_NEAR(r.max_abs, 0.16, 1e-12);
    EXPECT_GT(r.relative(), 1e-2);
}

TEST(WDVV, TwoDimensionalUnitNormalForm) {
    // Phi = 1/2 x1^2 x2 + f(x2) with g = Phi_1ab; third derivatives analytic.
    const Matrix g{{0.0, 1.0}, {1.0, 0.0}};
    const std::vector<std::pair<std::function<double(double)>, std::function<double(double)>>> tails{
        {[](double t) { return std::exp(t); }, [](double t) { return std::exp(t); }},
        {[](double t) { return std::pow(t, 5) - 3.0 * t * t; }, [](double t) { return 60.0 * t * t; }},
        {[](double t) { return std::sin(2.0 * t); }, [](double t) { return -8.0 * std::cos(2.0 * t); }}};
    for (const auto& [f, f3] : tails) {
        PotentialField phi(2, [f](const Vector& x) { return 0.5 * x(0) * x(0) * x(1) + f(x(1)); });
        phi.with_third([f3](const Vector& x) {
            Tensor3 t(2);
            t(0, 0, 1) = t(0, 1, 0) = t(1, 0, 0) = 1.0;
            t(1, 1, 1) = f3(x(1));
            return t;
        });
        const PotentialField numeric(2, [f](const Vector& x) { return 0.5 * x(0) * x(0) * x(1) + f(x(1)); });
        for (const Vector& x : {Vector{{0.2, 0.4}}, Vector{{-1.0, 1.3}}}) {
            EXPECT_LT(frob::wdvv_residual(phi, g, x).max_abs, 1e-12);
            EXPECT_LT(frob::wdvv_residual(numeric, g, x).max_abs, 1e-7);
        }
    }
}

TEST(WDVV, TwoDimensionalWithoutUnitCanFail) {
    // Outside unit normal form the 2-d equations are not automatic.
    const PotentialField phi(2, [](const Vector& x) { return 0.5 * x(0) * x(0) * x(1); });
    EXPECT_NEAR(frob::wdvv_residual(phi, Matrix::Identity(2, 2), Vector{{0.5, 0.5}}).max_abs, 1.0, 1e-6);
}

TEST(WDVV, QuadraticShiftInvariance) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Vector x{{0.0, 1.0, 1.0}};
    const double base = frob::wdvv_residual(wdvv3(0.1), kAntidiagonal, x).max_abs;
    for (int trial = 0; trial < 5; ++trial) {
        Matrix q(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) q(i, j) = u(rng);
        const auto inner = wdvv3(0.1);
        const PotentialField shifted(3, [inner, q](const Vector& y) { return inner(y) + y.dot(q * y); });
        EXPECT_NEAR(frob::wdvv_residual(shifted, kAntidiagonal, x).max_abs, base, 1e-6);
    }
}

TEST(WDVV, ZeroResidualMeansAssociative) {
    for (double c : {0.0, 0.1}) {
        const Vector x{{0.0, 1.0, 1.0}};
        const auto w = frob::wdvv_residual(wdvv3(c), kAntidiagonal, x);
        const auto ax = frob::frobenius_axioms(frob::algebra_from_potential(wdvv3(c).third(x), kAntidiagonal));
        EXPECT_EQ(w.max_abs < 1e-10, ax.associativity < 1e-10) << "c = " << c;
    }
}

TEST(Axioms, DiagonalAlgebra) {
    const auto rep = frob::frobenius_axioms(FrobeniusAlgebra::diagonal(4));
    EXPECT_EQ(rep.commutativity, 0.0);
    EXPECT_EQ(rep.associativity, 0.0);
    EXPECT_EQ(rep.invariance, 0.0);
    EXPECT_DOUBLE_EQ(rep.nondegeneracy, 1.0);
    ASSERT_TRUE(rep.unit.has_value());
    EXPECT_LT((*rep.unit - Vector::Ones(4)).norm(), 1e-12);
}

TEST(Axioms, ParacomplexAlgebra) {
    const auto rep = frob::frobenius_axioms(FrobeniusAlgebra::paracomplex());
    EXPECT_EQ(rep.commutativity, 0.0);
    EXPECT_EQ(rep.associativity, 0.0);
    EXPECT_EQ(rep.invariance, 0.0);
    ASSERT_TRUE(rep.unit.has_value());
    EXPECT_LT((*rep.unit - Vector{{1.0, 0.0}}).norm(), 1e-12);
}

TEST(Axioms, PerturbedDiagonalFailsAssociativity) {
    Tensor3 c = FrobeniusAlgebra::diagonal(3).constants();
    c(0, 0, 1) += 0.1;
    const auto rep = frob::frobenius_axioms(FrobeniusAlgebra(c, Matrix::Identity(3, 3)));
    EXPECT_GE(rep.associativity, 0.01);
}

TEST(Novikov, DiagonalAlgebraIdentities) {
    const auto b = FrobeniusAlgebra::diagonal(3).constants();
    const auto rep = frob::novikov_residuals(b, geo::MetricField::constant(Matrix::Identity(3, 3)), Vector::Ones(3));
    EXPECT_EQ(rep.left_symmetry, 0.0);
    EXPECT_EQ(rep.right_identity, 0.0);
}

TEST(Novikov, LinearDiagonalMetricSymmetrization) {
    const geo::MetricField g(3, [](const Vector& u) { return Matrix(u.asDiagonal()); });
    Tensor3 b(3);
    for (std::size_t i = 0; i < 3; ++i) b(i, i, i) = 0.5;
    const auto rep = frob::novikov_residuals(b, g, Vector{{1.5, 2.0, 0.7}});
    EXPECT_LT(rep.symmetrization, 1e-8);
    EXPECT_EQ(rep.left_symmetry, 0.0);
    EXPECT_EQ(rep.right_identity, 0.0);
}

TEST(Novikov, NonsymmetricBFails) {
    const geo::MetricField g(2, [](const Vector& u) { return Matrix(u.asDiagonal()); });
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tensor3 b(2);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) b(k, i, j) = u(rng);
    EXPECT_GT(frob::novikov_residuals(b, g, Vector{{1.0, 2.0}}).symmetrization, 0.0);
}

TEST(Idempotents, Paracomplex) {
    const auto found = frob::find_idempotents_rank2(FrobeniusAlgebra::paracomplex());
    ASSERT_EQ(found.size(), 4u);
    const std::vector<Vector> expected{Vector{{0.0, 0.0}}, Vector{{0.5, -0.5}}, Vector{{0.5, 0.5}}, Vector{{1.0, 0.0}}};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_LT((found[i] - expected[i]).norm(), 1e-10);
    // closed under the reflection (re, im) -> (re, -im)
    for (const auto& a : found) {
        const Vector r{{a(0), -a(1)}};
        EXPECT_TRUE(std::any_of(found.begin(), found.end(), [&](const Vector& b) { return (b - r).norm() < 1e-10; }));
    }
}

TEST(Idempotents, DualNumbers) {
    Tensor3 c(2);
    c(0, 0, 0) = 1.0;
    c(1, 0, 1) = 1.0;
    c(1, 1, 0) = 1.0;
    const auto found = frob::find_idempotents_rank2(FrobeniusAlgebra(c, Matrix::Identity(2, 2)));
    ASSERT_EQ(found.size(), 2u);
    EXPECT_LT(found[0].norm(), 1e-12);
    EXPECT_LT((found[1] - Vector{{1.0, 0.0}}).norm(), 1e-10);
}

TEST(Idempotents, ZeroAlgebra) {
    const auto found = frob::find_idempotents_rank2(FrobeniusAlgebra(Tensor3(2), Matrix::Identity(2, 2)));
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(found[0].norm(), 0.0);
}

TEST(Idempotents, DiagonalAlgebra) {
    EXPECT_EQ(frob::find_idempotents_rank2(FrobeniusAlgebra::diagonal(2)).size(), 4u);
    EXPECT_THROW(frob::find_idempotents_rank2(FrobeniusAlgebra::diagonal(3)), DimensionMismatch);
}
