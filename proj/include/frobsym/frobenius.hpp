#pragma once

// Frobenius and Novikov algebras given by structure constants.
//
// Index dictionary: structure constants are stored as c(k, i, j) = c^k_ij with
// e_i o e_j = c^k_ij e_k. The hydrodynamic-bracket tensor b^{ij}_k, whose
// algebra is e^i e^j = b^{ij}_k e^k, maps to c(k, i, j) = b^{ij}_k.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "polynomial.hpp"
#include "statmanifold.hpp"

namespace frobsym::frob {

class FrobeniusAlgebra {
public:
    FrobeniusAlgebra(Tensor3 constants, Matrix pairing, std::optional<Vector> unit = std::nullopt)
        : c_(std::move(constants)), pairing_(std::move(pairing)), unit_(std::move(unit)) {
        const auto n = static_cast<Eigen::Index>(c_.dim());
        if (n < 1) throw DimensionMismatch("algebra dimension must be positive");
        if (pairing_.rows() != n || pairing_.cols() != n) throw DimensionMismatch("pairing must be n x n");
        if (symmetry_defect(pairing_) > 1e-12 * std::max(1.0, max_abs(pairing_))) throw InvariantViolation("pairing must be symmetric");
        if (unit_ && unit_->size() != n) throw DimensionMismatch("declared unit has wrong length");
    }

    std::size_t dim() const noexcept { return c_.dim(); }
    const Tensor3& constants() const noexcept { return c_; }
    const Matrix& pairing() const noexcept { return pairing_; }
    const std::optional<Vector>& unit() const noexcept { return unit_; }

    Vector multiply(const Vector& a, const Vector& b) const {
        const auto n = dim();
        Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) {
                const double ai = a(static_cast<Eigen::Index>(i));
                if (ai == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) out(static_cast<Eigen::Index>(k)) += c_(k, i, j) * ai * b(static_cast<Eigen::Index>(j));
            }
        return out;
    }

    Vector basis(std::size_t i) const { return Vector::Unit(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(i)); }

    /// Diagonal algebra e_i o e_j = delta_ij e_i with identity pairing.
    static FrobeniusAlgebra diagonal(std::size_t n) {
        Tensor3 c(n);
        for (std::size_t i = 0; i < n; ++i) c(i, i, i) = 1.0;
        return FrobeniusAlgebra(std::move(c), Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    }

    /// Paracomplex numbers in the basis {1, e}, pairing <z, w> = Re(z w).
    static FrobeniusAlgebra paracomplex() {
        Tensor3 c(2);
        c(0, 0, 0) = 1.0; // 1 1 = 1
        c(1, 0, 1) = 1.0; // 1 e = e
        c(1, 1, 0) = 1.0; // e 1 = e
        c(0, 1, 1) = 1.0; // e e = 1
        return FrobeniusAlgebra(std::move(c), Matrix::Identity(2, 2));
    }

private:
    Tensor3 c_;
    Matrix pairing_;
    std::optional<Vector> unit_;
};

/// c^k_ij = g^kf T_fij with pairing g, so that T(u, v, w) = g(u o v, w).
inline FrobeniusAlgebra algebra_from_potential(const Tensor3& third, const Matrix& g) {
    require_same_size(third.dim(), static_cast<std::size_t>(g.rows()), "third-derivative tensor vs metric");
    const Matrix ginv = checked_inverse(g, "metric");
    return FrobeniusAlgebra(raise_first(ginv, third), g);
}

inline FrobeniusAlgebra algebra_from_potential(const stat::CumulantTensor& third, const Matrix& g) {
    return algebra_from_potential(third.as_tensor3(), g);
}

struct WDVVResidual {
    double max_abs = 0.0; ///< max over (a,b,c,d) of the raw difference
    double scale = 0.0;   ///< max|Phi_3|^2 * max|g^-1|
    Vector point;

    double relative() const { return scale > 0.0 ? max_abs / scale : 0.0; }
};

/// Associativity equations (even case) for third derivatives `t` and inverse
/// metric `ginv`:  sum_ef t_abe g^ef t_fcd = sum_ef t_bce g^ef t_fad.
inline WDVVResidual wdvv_residual(const Tensor3& t, const Matrix& ginv) {
    const auto n = t.dim();
    require_same_size(n, static_cast<std::size_t>(ginv.rows()), "third-derivative tensor vs metric");
    // contraction m(a, b, f) = sum_e t_abe g^ef
    Tensor3 m(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t f = 0; f < n; ++f) {
                double s = 0.0;
                for (std::size_t e = 0; e < n; ++e) s += t(a, b, e) * ginv(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(f));
                m(a, b, f) = s;
            }
    WDVVResidual r;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) {
                    double lhs = 0.0, rhs = 0.0;
                    for (std::size_t f = 0; f < n; ++f) {
                        lhs += m(a, b, f) * t(f, c, d);
                        rhs += m(b, c, f) * t(f, a, d);
                    }
                    r.max_abs = std::max(r.max_abs, std::abs(lhs - rhs));
                }
    const double tmax = t.max_abs();
    r.scale = tmax * tmax * max_abs(ginv);
    return r;
}

inline WDVVResidual wdvv_residual(const geo::PotentialField& potential, const Matrix& g, const Vector& x) {
    auto r = wdvv_residual(potential.third(x), checked_inverse(g, "metric"));
    r.point = x;
    return r;
}

inline WDVVResidual wdvv_residual(const geo::PotentialField& potential, const geo::MetricField& g, const Vector& x) {
    return wdvv_residual(potential, g(x), x);
}

struct AxiomReport {
    double commutativity = 0.0;
    double associativity = 0.0;
    double invariance = 0.0;      ///< max |<e_i o e_j, e_k> - <e_i, e_j o e_k>|
    double nondegeneracy = 0.0;   ///< min |eigenvalue| of the pairing
    std::optional<Vector> unit;   ///< declared, or found by least squares
    std::optional<double> unit_residual;
};

inline constexpr double kUnitSearchTolerance = 1e-10;

inline AxiomReport frobenius_axioms(const FrobeniusAlgebra& alg) {
    const auto n = alg.dim();
    const auto& c = alg.constants();
    const Matrix& p = alg.pairing();
    AxiomReport rep;
    rep.commutativity = c.lower_antisymmetry();

    std::vector<Vector> prod(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) prod[i * n + j] = alg.multiply(alg.basis(i), alg.basis(j));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const Vector left = alg.multiply(prod[i * n + j], alg.basis(k));
                const Vector right = alg.multiply(alg.basis(i), prod[j * n + k]);
                rep.associativity = std::max(rep.associativity, (left - right).lpNorm<Eigen::Infinity>());
                const double a = prod[i * n + j].dot(p * alg.basis(k));
                const double b = alg.basis(i).dot(p * prod[j * n + k]);
                rep.invariance = std::max(rep.invariance, std::abs(a - b));
            }
    Eigen::SelfAdjointEigenSolver<Matrix> es(p);
    rep.nondegeneracy = es.eigenvalues().cwiseAbs().minCoeff();

    auto unit_residual = [&](const Vector& u) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            r = std::max(r, (alg.multiply(u, alg.basis(j)) - alg.basis(j)).lpNorm<Eigen::Infinity>());
            r = std::max(r, (alg.multiply(alg.basis(j), u) - alg.basis(j)).lpNorm<Eigen::Infinity>());
        }
        return r;
    };
    if (alg.unit()) {
        rep.unit = alg.unit();
        rep.unit_residual = unit_residual(*alg.unit());
    } else {
        // two-sided: sum_i u^i c(k, i, j) = delta_kj and sum_i u^i c(k, j, i) = delta_kj
        const auto N = static_cast<Eigen::Index>(n);
        Matrix m(2 * N * N, N);
        Vector rhs(2 * N * N);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                const auto row = static_cast<Eigen::Index>(k * n + j);
                for (std::size_t i = 0; i < n; ++i) {
                    m(row, static_cast<Eigen::Index>(i)) = c(k, i, j);
                    m(row + N * N, static_cast<Eigen::Index>(i)) = c(k, j, i);
                }
                rhs(row) = rhs(row + N * N) = (k == j) ? 1.0 : 0.0;
            }
        const Vector u = m.colPivHouseholderQr().solve(rhs);
        const double r = unit_residual(u);
        if (r <= kUnitSearchTolerance) {
            rep.unit = u;
            rep.unit_residual = r;
        }
    }
    return rep;
}

struct NovikovReport {
    double left_symmetry = 0.0;   ///< a(bc) - b(ac)
    double right_identity = 0.0;  ///< (ab)c - a(bc) - (ac)b + a(cb)
    double symmetrization = 0.0;  ///< b^ij_k + b^ji_k - d g^ij / d u^k
};

/// `contravariant` is the u-dependent metric g^ij(u).
inline NovikovReport novikov_residuals(const Tensor3& b, const geo::MetricField& contravariant, const Vector& u) {
    const auto n = b.dim();
    require_same_size(n, static_cast<std::size_t>(contravariant.dim()), "structure constants vs metric");
    const FrobeniusAlgebra alg(b, Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    auto mul = [&alg](const Vector& x, const Vector& y) { return alg.multiply(x, y); };
    NovikovReport rep;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) {
                const Vector a = alg.basis(i), bb = alg.basis(j), c = alg.basis(l);
                rep.left_symmetry = std::max(rep.left_symmetry, (mul(a, mul(bb, c)) - mul(bb, mul(a, c))).lpNorm<Eigen::Infinity>());
                const Vector lhs = mul(mul(a, bb), c) - mul(a, mul(bb, c));
                const Vector rhs = mul(mul(a, c), bb) - mul(a, mul(c, bb));
                rep.right_identity = std::max(rep.right_identity, (lhs - rhs).lpNorm<Eigen::Infinity>());
            }
    const auto dg = contravariant.derivatives(u);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double r = b(k, i, j) + b(k, j, i) - dg[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                rep.symmetrization = std::max(rep.symmetrization, std::abs(r));
            }
    return rep;
}

namespace detail {

// Determinant of a small square matrix of polynomials by cofactor expansion.
inline Polynomial poly_det(const std::vector<std::vector<Polynomial>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Polynomial acc{0.0};
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<std::vector<Polynomial>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Polynomial> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != col) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        const Polynomial term = m[0][col] * poly_det(minor);
        acc = (col % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// Polynomial in t whose coefficients are polynomials in s: coeffs[d] multiplies t^d.
using BiPoly = std::array<Polynomial, 3>;

inline int t_degree(const BiPoly& p, double tol) {
    for (int d = 2; d >= 0; --d)
        if (!p[static_cast<std::size_t>(d)].is_zero(tol)) return d;
    return -1;
}

/// Resultant of p and q with respect to t (Sylvester determinant).
inline Polynomial resultant(const BiPoly& p, const BiPoly& q, double tol) {
    const int dp = t_degree(p, tol), dq = t_degree(q, tol);
    if (dp < 0 || dq < 0) return Polynomial{0.0};
    if (dp == 0) return p[0];
    if (dq == 0) return q[0];
    const auto size = static_cast<std::size_t>(dp + dq);
    std::vector<std::vector<Polynomial>> syl(size, std::vector<Polynomial>(size, Polynomial{0.0}));
    for (int r = 0; r < dq; ++r)
        for (int d = 0; d <= dp; ++d) syl[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + dp - d)] = p[static_cast<std::size_t>(d)];
    for (int r = 0; r < dp; ++r)
        for (int d = 0; d <= dq; ++d) syl[static_cast<std::size_t>(dq + r)][static_cast<std::size_t>(r + dq - d)] = q[static_cast<std::size_t>(d)];
    return poly_det(syl);
}

inline std::vector<double> roots_in_t(const BiPoly& p, double s, double tol) {
    const Polynomial at{p[0](s), p[1](s), p[2](s)};
    if (at.is_zero(tol)) return {};
    return at.real_roots();
}

} // namespace detail

inline constexpr double kIdempotentTolerance = 1e-10;

/// Every real a with a o a = a in a 2-dimensional algebra. The quadratic
/// system is reduced to a univariate resultant in each coordinate; candidate
/// roots are Newton-polished and kept when the residual is below 1e-10.
inline std::vector<Vector> find_idempotents_rank2(const FrobeniusAlgebra& alg) {
    if (alg.dim() != 2) throw DimensionMismatch("idempotent search needs a 2-dimensional algebra");
    const Tensor3& c = alg.constants();
    std::array<double, 2> A{}, B{}, C{};
    for (std::size_t k = 0; k < 2; ++k) {
        A[k] = c(k, 0, 0);
        B[k] = c(k, 0, 1) + c(k, 1, 0);
        C[k] = c(k, 1, 1);
    }
    const double scale = std::max(1.0, c.max_abs());
    const double tol = 1e-12 * scale;

    auto residual = [&](const Vector& a) { return (alg.multiply(a, a) - a).lpNorm<Eigen::Infinity>(); };
    auto polish = [&](Vector a) {
        for (int it = 0; it < 50; ++it) {
            const Vector f = alg.multiply(a, a) - a;
            if (f.lpNorm<Eigen::Infinity>() <= 1e-15 * scale) break;
            Matrix jac(2, 2);
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t m = 0; m < 2; ++m) {
                    double v = (k == m) ? -1.0 : 0.0;
                    for (std::size_t j = 0; j < 2; ++j) v += (c(k, m, j) + c(k, j, m)) * a(static_cast<Eigen::Index>(j));
                    jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) = v;
                }
            if (std::abs(jac.determinant()) <= 1e-14 * scale * scale) break;
            const Vector next = a - jac.partialPivLu().solve(f);
            if (residual(next) > residual(a)) break;
            a = next;
        }
        return a;
    };

    std::vector<Vector> found;
    auto accept = [&](const Vector& candidate) {
        const Vector a = polish(candidate);
        if (!a.allFinite() || residual(a) > kIdempotentTolerance) return;
        for (const auto& f : found)
            if ((f - a).lpNorm<Eigen::Infinity>() <= 1e-8) return;
        found.push_back(a);
    };
    accept(Vector::Zero(2));

    // F_k = A_k x^2 + B_k x y + C_k y^2 - a_k, viewed as a quadratic in y (over x) and in x (over y).
    const std::array<detail::BiPoly, 2> in_y{
        detail::BiPoly{Polynomial{0.0, -1.0, A[0]}, Polynomial{0.0, B[0]}, Polynomial{C[0]}},
        detail::BiPoly{Polynomial{0.0, 0.0, A[1]}, Polynomial{-1.0, B[1]}, Polynomial{C[1]}}};
    const std::array<detail::BiPoly, 2> in_x{
        detail::BiPoly{Polynomial{0.0, 0.0, C[0]}, Polynomial{-1.0, B[0]}, Polynomial{A[0]}},
        detail::BiPoly{Polynomial{0.0, -1.0, C[1]}, Polynomial{0.0, B[1]}, Polynomial{A[1]}}};

    bool eliminated = false;
    for (int pass = 0; pass < 2; ++pass) {
        const auto& sys = pass == 0 ? in_y : in_x;
        const Polynomial res = detail::resultant(sys[0], sys[1], tol);
        if (res.degree() < 0 || res.is_zero(tol * tol)) continue;
        eliminated = true;
        for (double s : res.real_roots()) {
            std::vector<double> ts = detail::roots_in_t(sys[0], s, tol);
            const auto more = detail::roots_in_t(sys[1], s, tol);
            ts.insert(ts.end(), more.begin(), more.end());
            for (double t : ts) accept(pass == 0 ? Vector{{s, t}} : Vector{{t, s}});
        }
    }
    if (!eliminated) {
        for (double x = -3.0; x <= 3.0; x += 0.25)
            for (double y = -3.0; y <= 3.0; y += 0.25) accept(Vector{{x, y}});
    }
    std::sort(found.begin(), found.end(), [](const Vector& a, const Vector& b) {
        return a(0) != b(0) ? a(0) < b(0) : a(1) < b(1);
    });
    return found;
}

} // namespace frobsym::frob
