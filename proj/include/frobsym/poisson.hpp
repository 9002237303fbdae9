#pragma once

// Poisson brackets on phase space (canonical, spin-extended, paracomplex),
// the first-order local Lie bracket, and a lattice discretization of the
// hydrodynamic-type bracket.
//
// Sign convention: {A, B} = dA/dp_mu dB/dz^mu - dB/dp_mu dA/dz^mu, so that
// {z, p} = -1 and dQ/ds = {H, Q} reproduces the canonical equations.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "finite_diff.hpp"
#include "linalg.hpp"
#include "paracomplex.hpp"
#include "phase_space.hpp"

namespace frobsym::poisson {

using Bracket = std::function<double(const Observable&, const Observable&, const PhasePoint&)>;

inline double canonical_bracket(const Observable& a, const Observable& b, const PhasePoint& y) {
    require_same_size(static_cast<std::size_t>(y.z.size()), static_cast<std::size_t>(y.p.size()), "positions vs momenta");
    const PhasePoint ga = a.gradient(y);
    const PhasePoint gb = b.gradient(y);
    return ga.p.dot(gb.z) - gb.p.dot(ga.z);
}

/// gamma(k, i, j) = gamma^k_ij, antisymmetric in (i, j).
class StructureConstants {
public:
    explicit StructureConstants(Tensor3 gamma) : gamma_(std::move(gamma)) {
        const auto m = gamma_.dim();
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    if (std::abs(gamma_(k, i, j) + gamma_(k, j, i)) > 1e-12)
                        throw InvariantViolation("structure constants must be antisymmetric in the lower indices");
    }

    static StructureConstants zero(std::size_t m) { return StructureConstants(Tensor3(m)); }

    /// gamma^k_ij = epsilon_ijk.
    static StructureConstants so3() {
        Tensor3 t(3);
        const int perm[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
        for (const auto& p : perm) {
            t(p[2], p[0], p[1]) = 1.0;
            t(p[2], p[1], p[0]) = -1.0;
        }
        return StructureConstants(t);
    }

    std::size_t dim() const noexcept { return gamma_.dim(); }
    double operator()(std::size_t k, std::size_t i, std::size_t j) const { return gamma_(k, i, j); }
    const Tensor3& tensor() const noexcept { return gamma_; }

    /// max over (a, b, c, k) of the cyclic sum gamma^l_bc gamma^k_al + cyclic.
    double jacobi_defect() const {
        const auto m = dim();
        double worst = 0.0;
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                for (std::size_t c = 0; c < m; ++c)
                    for (std::size_t k = 0; k < m; ++k) {
                        double s = 0.0;
                        for (std::size_t l = 0; l < m; ++l)
                            s += gamma_(l, b, c) * gamma_(k, a, l) + gamma_(l, c, a) * gamma_(k, b, l) + gamma_(l, a, b) * gamma_(k, c, l);
                        worst = std::max(worst, std::abs(s));
                    }
        return worst;
    }

private:
    Tensor3 gamma_;
};

/// Canonical part plus -Lambda_k gamma^k_ij dA/dLambda_i dB/dLambda_j.
inline double extended_bracket(const Observable& a, const Observable& b, const PhasePoint& y, const StructureConstants& gamma) {
    require_same_size(static_cast<std::size_t>(y.spin.size()), gamma.dim(), "spin block vs structure constants");
    const PhasePoint ga = a.gradient(y);
    const PhasePoint gb = b.gradient(y);
    double out = ga.p.dot(gb.z) - gb.p.dot(ga.z);
    const auto m = gamma.dim();
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const auto K = static_cast<Eigen::Index>(k), I = static_cast<Eigen::Index>(i), J = static_cast<Eigen::Index>(j);
                out -= y.spin(K) * gamma(k, i, j) * ga.spin(I) * gb.spin(J);
            }
    return out;
}

inline Bracket canonical() { return [](const Observable& a, const Observable& b, const PhasePoint& y) { return canonical_bracket(a, b, y); }; }

inline Bracket extended(StructureConstants gamma) {
    return [gamma = std::move(gamma)](const Observable& a, const Observable& b, const PhasePoint& y) {
        return extended_bracket(a, b, y, gamma);
    };
}

/// 1/2 Im <xi, eta>. The (j, k) and (k, j) terms are summed as a pair so that
/// {xi, xi} vanishes exactly for symmetric g.
inline double paracomplex_bracket(const Matrix& g, const para::ParaVector& xi, const para::ParaVector& eta) {
    require_same_size(static_cast<std::size_t>(g.rows()), xi.size(), "metric vs first vector");
    require_same_size(static_cast<std::size_t>(g.cols()), eta.size(), "metric vs second vector");
    if (g.rows() != g.cols()) throw DimensionMismatch("metric must be square");
    // Im(xi^j conj(eta^k)) = y_j x_k - x_j y_k
    auto im = [&](std::size_t j, std::size_t k) { return xi[j].im * eta[k].re - xi[j].re * eta[k].im; };
    auto gij = [&g](std::size_t j, std::size_t k) { return g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)); };
    double s = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
        s += gij(j, j) * im(j, j);
        for (std::size_t k = j + 1; k < xi.size(); ++k) s += gij(j, k) * im(j, k) + gij(k, j) * im(k, j);
    }
    return 0.5 * s;
}

/// Same value through (e/2) (<xi, eta> - conj <xi, eta>) / 2, which is real.
inline double paracomplex_bracket_conjugate_form(const Matrix& g, const para::ParaVector& xi, const para::ParaVector& eta) {
    const para::ParaNumber h = para::hermitian_product(g, xi, eta);
    const para::ParaNumber v = para::ParaNumber(0.0, 0.5) * ((h - para::conj(h)) * para::ParaNumber(0.5));
    return v.re;
}

/// {H, Q}.
inline double evolution_derivative(const Observable& h, const Observable& q, const PhasePoint& y) { return canonical_bracket(h, q, y); }

struct PropertyResiduals {
    double antisymmetry = 0.0;
    double chain_rule = 0.0;
    double leibniz = 0.0;
    double jacobi = 0.0;

    double worst() const { return std::max({antisymmetry, chain_rule, leibniz, jacobi}); }
};

namespace detail {
/// Observable whose value is {a, b}; its gradient comes from finite differences.
inline Observable bracket_observable(const Bracket& br, const Observable& a, const Observable& b, double step) {
    return Observable([br, a, b](const PhasePoint& y) { return br(a, b, y); }, {}, step);
}
} // namespace detail

/// Antisymmetry, the chain rule with f(t) = t^2 and g(t) = sin t, the Leibniz
/// rule {AB, C} = A{B, C} + B{A, C}, and the Jacobi identity, maximized over
/// the samples. Composite observables are differentiated numerically.
inline PropertyResiduals bracket_property_residuals(const Bracket& br, const Observable& a, const Observable& b, const Observable& c,
                                                    const std::vector<PhasePoint>& samples, double step = FdSteps{}.first) {
    const Observable fa([a](const PhasePoint& y) { return a(y) * a(y); }, {}, step);
    const Observable gb([b](const PhasePoint& y) { return std::sin(b(y)); }, {}, step);
    const Observable ab([a, b](const PhasePoint& y) { return a(y) * b(y); }, {}, step);
    const Observable bc = detail::bracket_observable(br, b, c, step);
    const Observable ca = detail::bracket_observable(br, c, a, step);
    const Observable ab_br = detail::bracket_observable(br, a, b, step);

    PropertyResiduals r;
    for (const auto& y : samples) {
        const double vab = br(a, b, y);
        r.antisymmetry = std::max({r.antisymmetry, std::abs(vab + br(b, a, y)), std::abs(br(a, a, y))});
        r.chain_rule = std::max(r.chain_rule, std::abs(br(fa, gb, y) - 2.0 * a(y) * std::cos(b(y)) * vab));
        r.leibniz = std::max(r.leibniz, std::abs(br(ab, c, y) - a(y) * br(b, c, y) - b(y) * br(a, c, y)));
        r.jacobi = std::max(r.jacobi, std::abs(br(a, bc, y) + br(b, ca, y) + br(c, ab_br, y)));
    }
    return r;
}

/// Periodic central difference (delta_{m,n+1} - delta_{m,n-1}) / (2h).
inline Matrix periodic_derivative(Eigen::Index n, double h) {
    if (n < 3) throw DimensionMismatch("periodic stencil needs at least 3 sites");
    Matrix d = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d(i, (i + 1) % n) += 1.0 / (2.0 * h);
        d(i, (i + n - 1) % n) -= 1.0 / (2.0 * h);
    }
    return d;
}

/// [p, q]_k = b^{ij}_k (p_i q_j' - q_i p_j'). Fields are r x N (component,
/// site); b(i, j, k) = b^{ij}_k.
inline Matrix local_lie_bracket(const Tensor3& b, const Matrix& p, const Matrix& q, double h) {
    const auto r = static_cast<Eigen::Index>(b.dim());
    if (p.rows() != r || q.rows() != r) throw DimensionMismatch("covector components vs structure constants");
    if (p.cols() != q.cols()) throw DimensionMismatch("covector grids differ");
    const Matrix d = periodic_derivative(p.cols(), h);
    const Matrix dp = p * d.transpose();
    const Matrix dq = q * d.transpose();
    Matrix out = Matrix::Zero(r, p.cols());
    for (Eigen::Index k = 0; k < r; ++k)
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < r; ++j) {
                const double c = b(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k));
                if (c == 0.0) continue;
                out.row(k) += c * (p.row(i).cwiseProduct(dq.row(j)) - q.row(i).cwiseProduct(dp.row(j)));
            }
    return out;
}

/// {u^i(x), u^j(y)} = g^{ij}(u(x)) delta'(x - y) + b^{ij}_k u^k_x delta(x - y)
/// on a periodic grid of N sites with spacing h (period N h).
class LatticeBracket {
public:
    using MetricFn = std::function<Matrix(const Vector&)>;
    /// Returns the r matrices d g / d u^l.
    using MetricDerivativeFn = std::function<std::vector<Matrix>(const Vector&)>;

    LatticeBracket(Eigen::Index sites, Eigen::Index components, MetricFn g, Tensor3 b, double period = 2.0 * 3.14159265358979323846,
                   MetricDerivativeFn dg = {})
        : n_(sites), r_(components), g_(std::move(g)), dg_(std::move(dg)), b_(std::move(b)), h_(period / static_cast<double>(sites)) {
        if (n_ < 4) throw DimensionMismatch("lattice needs N >= 4");
        if (static_cast<Eigen::Index>(b_.dim()) != r_) throw DimensionMismatch("b vs field dimension");
        d_ = periodic_derivative(n_, h_);
    }

    /// g^{ij} = c^{ij} constant and b = 0.
    static LatticeBracket constant(Eigen::Index sites, const Matrix& c) {
        return LatticeBracket(sites, c.rows(), [c](const Vector&) { return c; }, Tensor3(static_cast<std::size_t>(c.rows())));
    }

    /// g^{ij} = delta^{ij} u^i with b^{ij}_k = 1/2 d_k g^{ij}.
    static LatticeBracket linear_diagonal(Eigen::Index sites, Eigen::Index components) {
        Tensor3 b(static_cast<std::size_t>(components));
        for (std::size_t i = 0; i < b.dim(); ++i) b(i, i, i) = 0.5;
        return LatticeBracket(
            sites, components, [](const Vector& u) { return Matrix(u.asDiagonal()); }, b, 2.0 * 3.14159265358979323846,
            [components](const Vector&) {
                std::vector<Matrix> out;
                for (Eigen::Index l = 0; l < components; ++l) {
                    Matrix m = Matrix::Zero(components, components);
                    m(l, l) = 1.0;
                    out.push_back(m);
                }
                return out;
            });
    }

    Eigen::Index sites() const noexcept { return n_; }
    Eigen::Index components() const noexcept { return r_; }
    double spacing() const noexcept { return h_; }
    const Matrix& stencil() const noexcept { return d_; }
    const Tensor3& b() const noexcept { return b_; }

    Matrix metric(const Vector& u) const {
        Matrix g = g_(u);
        if (g.rows() != r_ || g.cols() != r_) throw DimensionMismatch("lattice metric callback returned wrong shape");
        return g;
    }

    std::vector<Matrix> metric_derivatives(const Vector& u) const {
        if (dg_) return dg_(u);
        std::vector<Matrix> out;
        for (Eigen::Index l = 0; l < r_; ++l)
            out.push_back(fd::partial([this](const Vector& v) { return metric(v); }, u, l, fd::scaled_step(FdSteps{}.first, u(l))));
        return out;
    }

    /// State is r x N (component, site).
    void check_state(const Matrix& u) const {
        if (u.rows() != r_ || u.cols() != n_) throw DimensionMismatch("field state vs lattice shape");
    }

    /// rN x rN operator; row/column index i * N + n.
    Matrix assemble(const Matrix& u) const {
        check_state(u);
        const Matrix du = u * d_.transpose();
        Matrix out = Matrix::Zero(r_ * n_, r_ * n_);
        for (Eigen::Index n = 0; n < n_; ++n) {
            const Matrix g = metric(u.col(n));
            for (Eigen::Index i = 0; i < r_; ++i)
                for (Eigen::Index j = 0; j < r_; ++j) {
                    for (Eigen::Index m = 0; m < n_; ++m)
                        if (d_(n, m) != 0.0) out(i * n_ + n, j * n_ + m) += g(i, j) * d_(n, m);
                    double diag = 0.0;
                    for (Eigen::Index k = 0; k < r_; ++k)
                        diag += b_(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k)) * du(k, n);
                    out(i * n_ + n, j * n_ + n) += diag;
                }
        }
        return out;
    }

    /// h * phi^T B psi for the linear functionals F = h sum phi_i(n) u^i_n.
    double bracket(const Matrix& u, const Matrix& phi, const Matrix& psi) const {
        return h_ * flat(phi).dot(assemble(u) * flat(psi));
    }

    /// Gradient with respect to u of psi^T B(u) chi, shaped r x N.
    Matrix bracket_gradient(const Matrix& u, const Matrix& psi, const Matrix& chi) const {
        check_state(u);
        const Matrix dchi = chi * d_.transpose();
        Matrix grad = Matrix::Zero(r_, n_);
        for (Eigen::Index p = 0; p < n_; ++p) {
            const auto dg = metric_derivatives(u.col(p));
            for (Eigen::Index l = 0; l < r_; ++l) grad(l, p) += psi.col(p).dot(dg[static_cast<std::size_t>(l)] * dchi.col(p));
        }
        Matrix w = Matrix::Zero(r_, n_);
        for (Eigen::Index l = 0; l < r_; ++l)
            for (Eigen::Index i = 0; i < r_; ++i)
                for (Eigen::Index j = 0; j < r_; ++j) {
                    const double c = b_(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(l));
                    if (c != 0.0) w.row(l) += c * psi.row(i).cwiseProduct(chi.row(j));
                }
        grad -= w * d_.transpose();
        return grad;
    }

    /// Cyclic sum h phi^T B grad(psi^T B chi) over the three functionals.
    double jacobi(const Matrix& u, const Matrix& phi, const Matrix& psi, const Matrix& chi) const {
        const Matrix b = assemble(u);
        auto term = [&](const Matrix& x, const Matrix& y, const Matrix& z) {
            return h_ * flat(x).dot(b * flat(bracket_gradient(u, y, z)));
        };
        return term(phi, psi, chi) + term(psi, chi, phi) + term(chi, phi, psi);
    }

    Matrix sample(const std::function<double(Eigen::Index, double)>& f) const {
        Matrix out(r_, n_);
        for (Eigen::Index i = 0; i < r_; ++i)
            for (Eigen::Index n = 0; n < n_; ++n) out(i, n) = f(i, h_ * static_cast<double>(n));
        return out;
    }

    static Vector flat(const Matrix& m) {
        Vector v(m.size());
        for (Eigen::Index i = 0; i < m.rows(); ++i) v.segment(i * m.cols(), m.cols()) = m.row(i).transpose();
        return v;
    }

private:
    Eigen::Index n_;
    Eigen::Index r_;
    MetricFn g_;
    MetricDerivativeFn dg_;
    Tensor3 b_;
    double h_;
    Matrix d_;
};

struct LatticeResiduals {
    double skew = 0.0;              ///< max |B + B^T| entrywise
    double weak_antisymmetry = 0.0; ///< max |{F, G} + {G, F}| over test functionals
    double jacobi = 0.0;            ///< max |cyclic sum| over test triples
};

/// Smooth periodic test functionals used by lattice_hydro_bracket.
inline std::vector<Matrix> lattice_test_functionals(const LatticeBracket& lb) {
    return {lb.sample([](Eigen::Index i, double x) { return std::cos(x + 0.3 * static_cast<double>(i)); }),
            lb.sample([](Eigen::Index i, double x) { return std::sin(2.0 * x) + 0.5 * static_cast<double>(i); }),
            lb.sample([](Eigen::Index i, double x) { return std::cos(x) * std::sin(x + 0.7 * static_cast<double>(i + 1)); })};
}

/// Standard smooth state u^i = 2 + sin(x + i).
inline Matrix lattice_smooth_state(const LatticeBracket& lb) {
    return lb.sample([](Eigen::Index i, double x) { return 2.0 + std::sin(x + static_cast<double>(i)); });
}

inline LatticeResiduals lattice_hydro_bracket(const LatticeBracket& lb, const Matrix& u) {
    LatticeResiduals r;
    const Matrix b = lb.assemble(u);
    r.skew = max_abs(b + b.transpose());
    const auto tests = lattice_test_functionals(lb);
    for (std::size_t i = 0; i < tests.size(); ++i)
        for (std::size_t j = i; j < tests.size(); ++j)
            r.weak_antisymmetry =
                std::max(r.weak_antisymmetry, std::abs(lb.bracket(u, tests[i], tests[j]) + lb.bracket(u, tests[j], tests[i])));
    r.jacobi = std::abs(lb.jacobi(u, tests[0], tests[1], tests[2]));
    return r;
}

} // namespace frobsym::poisson
