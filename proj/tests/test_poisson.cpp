#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frobsym/poisson.hpp"
#include "frobsym/symplectic.hpp"

using namespace frobsym;
using poisson::StructureConstants;

namespace {

Observable coord(Eigen::Index i) { return Observable::coordinate(i); }

// Polynomial observables on (z1, z2, p1, p2, L1, L2, L3) with analytic gradients.
Observable poly_a() {
    return Observable([](const PhasePoint& y) { return y.z(0) * y.p(0) * y.p(1) + y.spin(0) * y.spin(1) + y.z(1); },
                      [](const PhasePoint& y) {
                          return PhasePoint(Vector{{y.p(0) * y.p(1), 1.0}}, Vector{{y.z(0) * y.p(1), y.z(0) * y.p(0)}},
                                            Vector{{y.spin(1), y.spin(0), 0.0}});
                      });
}
Observable poly_b() {
    return Observable([](const PhasePoint& y) { return y.z(0) * y.z(0) * y.z(1) + y.p(1) * y.spin(2) + y.spin(2) * y.spin(1); },
                      [](const PhasePoint& y) {
                          return PhasePoint(Vector{{2.0 * y.z(0) * y.z(1), y.z(0) * y.z(0)}}, Vector{{0.0, y.spin(2)}},
                                            Vector{{0.0, y.spin(2), y.p(1) + y.spin(1)}});
                      });
}
Observable poly_c() {
    return Observable([](const PhasePoint& y) { return y.p(0) * y.p(0) * y.z(1) + y.spin(0) * y.spin(0) * y.spin(2); },
                      [](const PhasePoint& y) {
                          return PhasePoint(Vector{{0.0, y.p(0) * y.p(0)}}, Vector{{2.0 * y.p(0) * y.z(1), 0.0}},
                                            Vector{{2.0 * y.spin(0) * y.spin(2), 0.0, y.spin(0) * y.spin(0)}});
                      });
}

std::vector<PhasePoint> samples() {
    return {PhasePoint(Vector{{0.4, -0.3}}, Vector{{0.7, 0.2}}, Vector{{0.3, -0.5, 0.9}}),
            PhasePoint(Vector{{-1.1, 0.6}}, Vector{{0.1, -0.8}}, Vector{{1.2, 0.4, -0.2}})};
}

StructureConstants broken_so3() {
    Tensor3 t = StructureConstants::so3().tensor();
    t(1, 0, 1) = 1.0;
    t(1, 1, 0) = -1.0;
    return StructureConstants(t);
}

} // namespace

TEST(Canonical, Examples) {
    const PhasePoint y(Vector{{0.5, 1.5}}, Vector{{-0.2, 0.8}});
    EXPECT_EQ(poisson::canonical_bracket(coord(0), coord(2), y), -1.0);
    EXPECT_EQ(poisson::canonical_bracket(coord(2), coord(0), y), 1.0);
    EXPECT_EQ(poisson::canonical_bracket(coord(1), coord(1), y), 0.0);
    EXPECT_EQ(poisson::canonical_bracket(coord(0), coord(1), y), 0.0);
}

TEST(Extended, So3Examples) {
    const auto so3 = StructureConstants::so3();
    const PhasePoint y(Vector::Zero(1), Vector::Zero(1), Vector{{0.3, -0.5, 0.9}});
    EXPECT_EQ(poisson::extended_bracket(coord(2), coord(3), y, so3), -0.9);
    const Observable casimir([](const PhasePoint& q) { return q.spin.squaredNorm(); },
                             [](const PhasePoint& q) { return PhasePoint(Vector::Zero(1), Vector::Zero(1), 2.0 * q.spin); });
    for (Eigen::Index j = 2; j < 5; ++j) EXPECT_NEAR(poisson::extended_bracket(casimir, coord(j), y, so3), 0.0, 1e-15);
    EXPECT_LT(so3.jacobi_defect(), 1e-15);
}

TEST(Extended, ZeroGammaReducesToCanonical) {
    const auto y = samples()[0];
    EXPECT_DOUBLE_EQ(poisson::extended_bracket(poly_a(), poly_b(), y, StructureConstants::zero(3)),
                     poisson::canonical_bracket(poly_a(), poly_b(), y));
}

TEST(Extended, ShapeMismatch) {
    const PhasePoint y(Vector::Zero(1), Vector::Zero(1), Vector::Zero(2));
    EXPECT_THROW(poisson::extended_bracket(coord(0), coord(1), y, StructureConstants::so3()), DimensionMismatch);
}

TEST(StructureConstants, Validation) {
    Tensor3 t(2);
    t(0, 0, 1) = 1.0;
    EXPECT_THROW(StructureConstants{t}, InvariantViolation);
    EXPECT_GT(broken_so3().jacobi_defect(), 0.5);
}

TEST(Properties, Canonical) {
    const auto r = poisson::bracket_property_residuals(poisson::canonical(), poly_a(), poly_b(), poly_c(), samples());
    EXPECT_LT(r.worst(), 1e-6);
}

TEST(Properties, So3Extended) {
    const auto r = poisson::bracket_property_residuals(poisson::extended(StructureConstants::so3()), poly_a(), poly_b(), poly_c(), samples());
    EXPECT_LT(r.worst(), 1e-6);
}

TEST(Properties, BrokenGammaFailsJacobi) {
    const auto ys = samples();
    const auto r = poisson::bracket_property_residuals(poisson::extended(broken_so3()), coord(4), coord(5), coord(6), ys);
    EXPECT_GT(r.jacobi, 1e-3);
    EXPECT_LT(r.antisymmetry, 1e-12);
}

TEST(Properties, BilinearAndAntisymmetricRandomized) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const auto so3 = StructureConstants::so3();
    for (int i = 0; i < 20; ++i) {
        const PhasePoint y(Vector{{u(rng), u(rng)}}, Vector{{u(rng), u(rng)}}, Vector{{u(rng), u(rng), u(rng)}});
        const double s = u(rng);
        const auto a = poly_a(), b = poly_b(), c = poly_c();
        const Observable combo([&](const PhasePoint& q) { return a(q) + s * c(q); },
                               [&](const PhasePoint& q) {
                                   const auto ga = a.gradient(q), gc = c.gradient(q);
                                   return PhasePoint(ga.z + s * gc.z, ga.p + s * gc.p, ga.spin + s * gc.spin);
                               });
        const double lhs = poisson::extended_bracket(combo, b, y, so3);
        const double rhs = poisson::extended_bracket(a, b, y, so3) + s * poisson::extended_bracket(c, b, y, so3);
        EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
        EXPECT_NEAR(poisson::extended_bracket(a, b, y, so3), -poisson::extended_bracket(b, a, y, so3), 1e-10);
    }
}

TEST(Paracomplex, Examples) {
    const Matrix g = Matrix::Identity(1, 1);
    const para::ParaVector one{para::ParaNumber(1.0)}, e{para::ParaNumber::unit_e()};
    EXPECT_EQ(poisson::paracomplex_bracket(g, one, e), -0.5);
    EXPECT_EQ(poisson::paracomplex_bracket_conjugate_form(g, one, e), -0.5);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const Matrix g2{{1.0, 0.4}, {0.4, -2.0}};
    for (int i = 0; i < 100; ++i) {
        const para::ParaVector xi{{u(rng), u(rng)}, {u(rng), u(rng)}}, eta{{u(rng), u(rng)}, {u(rng), u(rng)}};
        EXPECT_EQ(poisson::paracomplex_bracket(g2, xi, xi), 0.0);
        EXPECT_NEAR(poisson::paracomplex_bracket(g2, xi, eta), poisson::paracomplex_bracket_conjugate_form(g2, xi, eta), 1e-12);
        EXPECT_NEAR(poisson::paracomplex_bracket(g2, xi, eta), -poisson::paracomplex_bracket(g2, eta, xi), 1e-12);
    }
    EXPECT_THROW(poisson::paracomplex_bracket(g, {one[0], one[0]}, one), DimensionMismatch);
}

TEST(Paracomplex, LinearInFirstArgument) {
    const Matrix g{{2.0, 0.0}, {0.0, 1.0}};
    const para::ParaVector a{{1.0, 2.0}, {0.5, -1.0}}, b{{-0.5, 0.25}, {2.0, 1.0}}, eta{{0.3, 0.7}, {-1.0, 0.5}};
    para::ParaVector sum{a[0] + b[0] * para::ParaNumber(2.0), a[1] + b[1] * para::ParaNumber(2.0)};
    EXPECT_NEAR(poisson::paracomplex_bracket(g, sum, eta),
                poisson::paracomplex_bracket(g, a, eta) + 2.0 * poisson::paracomplex_bracket(g, b, eta), 1e-14);
}

TEST(Evolution, MatchesIntegrator) {
    const Observable h([](const PhasePoint& y) { return 0.5 * (y.p(0) * y.p(0) + y.z(0) * y.z(0)); },
                       [](const PhasePoint& y) { return PhasePoint(y.z, y.p); });
    const Observable x = coord(0);
    const auto sep = symp::SeparableHamiltonian::quadratic(Matrix::Identity(1, 1), Matrix::Identity(1, 1));
    for (const PhasePoint& y : {PhasePoint(Vector::Ones(1), Vector::Zero(1)), PhasePoint(Vector::Ones(1), Vector::Constant(1, 0.5))}) {
        const double dt = 1e-6;
        const auto t = symp::integrate(sep, y, dt, 1);
        const double rate = (t.records.back().z(0) - y.z(0)) / dt;
        EXPECT_NEAR(poisson::evolution_derivative(h, x, y), rate, 1e-6);
        EXPECT_EQ(poisson::evolution_derivative(h, h, y), 0.0);
        EXPECT_EQ(poisson::evolution_derivative(h, Observable::constant(2.0), y), 0.0);
    }
}

TEST(LocalLie, Examples) {
    const Eigen::Index n = 32;
    const double h = 2.0 * M_PI / static_cast<double>(n);
    Tensor3 b(1);
    b(0, 0, 0) = 1.0;
    Matrix ones = Matrix::Ones(1, n), s(1, n), c(1, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s(0, i) = std::sin(h * static_cast<double>(i));
        c(0, i) = std::cos(h * static_cast<double>(i));
    }
    EXPECT_EQ(max_abs(poisson::local_lie_bracket(b, s, s, h)), 0.0);
    const Matrix pq = poisson::local_lie_bracket(b, ones, s, h);
    EXPECT_LT(max_abs(pq - c), 1e-2);
    EXPECT_EQ(pq, s * poisson::periodic_derivative(n, h).transpose());
    EXPECT_EQ(max_abs(poisson::local_lie_bracket(Tensor3(1), ones, s, h)), 0.0);
    EXPECT_THROW(poisson::local_lie_bracket(Tensor3(2), ones, s, h), DimensionMismatch);
}

TEST(LocalLie, DiscreteAntisymmetry) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tensor3 b(2);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) b(i, j, k) = u(rng);
    Matrix p(2, 16), q(2, 16);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        p(i) = u(rng);
        q(i) = u(rng);
    }
    EXPECT_EQ(max_abs(poisson::local_lie_bracket(b, p, q, 0.1) + poisson::local_lie_bracket(b, q, p, 0.1)), 0.0);
}

TEST(Lattice, StencilIsSkew) {
    const Matrix d = poisson::periodic_derivative(8, 0.25);
    EXPECT_EQ(max_abs(d + d.transpose()), 0.0);
}

TEST(Lattice, ConstantCoefficientsExactlySkew) {
    const auto lb = poisson::LatticeBracket::constant(16, Matrix{{2.0, 0.5}, {0.5, 1.0}});
    const auto r = poisson::lattice_hydro_bracket(lb, poisson::lattice_smooth_state(lb));
    EXPECT_EQ(r.skew, 0.0);
    EXPECT_LT(r.jacobi, 1e-14);
}

TEST(Lattice, LinearMetricJacobiConverges) {
    auto jac = [](Eigen::Index n) {
        const auto lb = poisson::LatticeBracket::linear_diagonal(n, 2);
        return poisson::lattice_hydro_bracket(lb, poisson::lattice_smooth_state(lb));
    };
    const auto coarse = jac(16), fine = jac(64);
    EXPECT_GE(coarse.jacobi / fine.jacobi, 4.0);
    EXPECT_GE(coarse.weak_antisymmetry / fine.weak_antisymmetry, 4.0);
}

TEST(Lattice, AnalyticAndNumericMetricDerivativesAgree) {
    const auto analytic = poisson::LatticeBracket::linear_diagonal(16, 2);
    const poisson::LatticeBracket numeric(16, 2, [](const Vector& u) { return Matrix(u.asDiagonal()); }, analytic.b());
    const Matrix u = poisson::lattice_smooth_state(analytic);
    const auto tests = poisson::lattice_test_functionals(analytic);
    EXPECT_NEAR(analytic.jacobi(u, tests[0], tests[1], tests[2]), numeric.jacobi(u, tests[0], tests[1], tests[2]), 1e-8);
}

TEST(Lattice, BracketGradientMatchesFiniteDifferences) {
    const auto lb = poisson::LatticeBracket::linear_diagonal(8, 2);
    const Matrix u = poisson::lattice_smooth_state(lb);
    const auto tests = poisson::lattice_test_functionals(lb);
    const Matrix grad = lb.bracket_gradient(u, tests[0], tests[1]);
    const Vector flat_u = poisson::LatticeBracket::flat(u);
    auto value = [&](const Vector& v) {
        Matrix m(2, 8);
        for (Eigen::Index i = 0; i < 2; ++i) m.row(i) = v.segment(i * 8, 8).transpose();
        return poisson::LatticeBracket::flat(tests[0]).dot(lb.assemble(m) * poisson::LatticeBracket::flat(tests[1]));
    };
    const Vector fdg = fd::gradient(value, flat_u, 1e-5);
    EXPECT_LT((fdg - poisson::LatticeBracket::flat(grad)).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(Lattice, ViolatingSymmetrizationBreaksAntisymmetry) {
    Tensor3 b(2);
    b(0, 0, 0) = 2.0; // b^{11}_1 + b^{11}_1 = 4 != d g^{11} / d u^1 = 1
    b(1, 1, 1) = 0.5;
    const poisson::LatticeBracket bad(32, 2, [](const Vector& u) { return Matrix(u.asDiagonal()); }, b);
    const auto good = poisson::LatticeBracket::linear_diagonal(32, 2);
    const Matrix u = poisson::lattice_smooth_state(good);
    const auto rb = poisson::lattice_hydro_bracket(bad, u), rg = poisson::lattice_hydro_bracket(good, u);
    EXPECT_GT(rb.skew, 0.0);
    EXPECT_GT(rb.weak_antisymmetry, 10.0 * rg.weak_antisymmetry);
}

TEST(Lattice, Validation) {
    EXPECT_THROW(poisson::LatticeBracket::constant(3, Matrix::Identity(1, 1)), DimensionMismatch);
    const auto lb = poisson::LatticeBracket::constant(8, Matrix::Identity(2, 2));
    EXPECT_THROW(lb.assemble(Matrix::Zero(2, 7)), DimensionMismatch);
}
