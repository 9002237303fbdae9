#pragma once

// Two-forms, the paracomplex Kaehler-type form, Dolbeault splitting of the
// exterior derivative in adapted coordinates, the Legendre transform of the
// relativistic particle Lagrangian, Hamiltonian vector fields and
// structure-preserving integrators.
//
// Conventions
//  * A two-form is a matrix J with Omega(u, v) = u^T J v, so
//    sum_a dx^a ^ dp_a is J = [[0, I], [-I, 0]] in (x, p) order.
//  * The Hamiltonian vector field solves i_X Omega = dH, contracting the first
//    slot: X^i J_ij = d_j H. For the canonical form this gives
//    dx/ds = dH/dp, dp/ds = -dH/dx.
//  * Paracomplex coordinates z = x + e y are realified as
//    (x^1..x^m, y^1..y^m). The adapted coordinates are z+ = x + y, z- = x - y.
//    Expanding (e/2) g_jk dz^j ^ dzbar^k with symmetric g leaves the real form
//    -g_jk dx^j ^ dy^k; we orient it so that m = 1, g = 1 gives +dx ^ dy,
//    i.e. J = [[0, g], [-g, 0]].

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "finite_diff.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "phase_space.hpp"

namespace frobsym::symp {

class TwoForm {
public:
    using Eval = std::function<Matrix(const Vector&)>;

    TwoForm(Eigen::Index dim, Eval eval, FdSteps steps = {}) : dim_(dim), eval_(std::move(eval)), steps_(steps) {}

    static TwoForm constant(const Matrix& j) {
        return TwoForm(j.rows(), [j](const Vector&) { return j; });
    }

    Eigen::Index dim() const noexcept { return dim_; }
    const FdSteps& steps() const noexcept { return steps_; }

    Matrix operator()(const Vector& y) const {
        require_same_size(static_cast<std::size_t>(y.size()), static_cast<std::size_t>(dim_), "point vs form dimension");
        Matrix j = eval_(y);
        if (j.rows() != dim_ || j.cols() != dim_) throw DimensionMismatch("form callback returned wrong shape");
        if (max_abs(j + j.transpose()) > 1e-12 * std::max(1.0, max_abs(j))) throw InvariantViolation("two-form is not antisymmetric");
        return j;
    }

    /// Omega(u, v) = u^T J v.
    double pair(const Vector& y, const Vector& u, const Vector& v) const { return u.dot((*this)(y) * v); }

private:
    Eigen::Index dim_;
    Eval eval_;
    FdSteps steps_;
};

inline Matrix canonical_matrix(Eigen::Index n) {
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n).setIdentity();
    j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return j;
}

/// sum_a dx^a ^ dp_a on (x, p).
inline TwoForm canonical_two_form(Eigen::Index n) {
    if (n < 1) throw DimensionMismatch("phase space needs n >= 1");
    return TwoForm::constant(canonical_matrix(n));
}

/// Realified paracomplex form at one point: J = [[0, g], [-g, 0]].
inline Matrix paracomplex_form_matrix(const Matrix& g) {
    if (g.rows() != g.cols()) throw DimensionMismatch("paracomplex metric must be square");
    if (symmetry_defect(g) > 1e-8 * std::max(1.0, max_abs(g))) throw InvariantViolation("paracomplex metric must be symmetric");
    const Eigen::Index m = g.rows();
    const Matrix gs = 0.5 * (g + g.transpose());
    Matrix j = Matrix::Zero(2 * m, 2 * m);
    j.topRightCorner(m, m) = gs;
    j.bottomLeftCorner(m, m) = -gs;
    return j;
}

/// Realified (e/2) g_jk dz^j ^ dzbar^k for a coefficient field g over (x, y).
inline TwoForm paracomplex_two_form(Eigen::Index m, std::function<Matrix(const Vector&)> g, FdSteps steps = {}) {
    return TwoForm(
        2 * m,
        [m, g = std::move(g)](const Vector& xy) {
            const Matrix gm = g(xy);
            if (gm.rows() != m || gm.cols() != m) throw DimensionMismatch("paracomplex metric callback returned wrong shape");
            return paracomplex_form_matrix(gm);
        },
        steps);
}

inline TwoForm paracomplex_two_form(const Matrix& g) { return TwoForm::constant(paracomplex_form_matrix(g)); }

/// (x, y) -> (z+, z-) = (x + y, x - y).
inline Vector adapted_from_realified(const Vector& xy) {
    const Eigen::Index m = xy.size() / 2;
    Vector z(2 * m);
    z << xy.head(m) + xy.tail(m), xy.head(m) - xy.tail(m);
    return z;
}

/// Mixed second partials d^2 phi / dz+^a dz-^b of a potential over adapted
/// coordinates (z+^1..z+^m, z-^1..z-^m).
inline Matrix dolbeault_form(const geo::PotentialField& phi, const Vector& adapted) {
    if (phi.dim() % 2 != 0) throw DimensionMismatch("adapted coordinates come in (z+, z-) pairs");
    const Eigen::Index m = phi.dim() / 2;
    return phi.hessian(adapted).topRightCorner(m, m);
}

/// Coefficient field over realified coordinates given by the Dolbeault form
/// of phi, ready for paracomplex_two_form. The mixed partials must satisfy
/// d+^a d-^b phi = d+^b d-^a phi; otherwise the form raises InvariantViolation.
inline std::function<Matrix(const Vector&)> dolbeault_coefficients(const geo::PotentialField& phi) {
    return [phi](const Vector& xy) { return dolbeault_form(phi, adapted_from_realified(xy)); };
}

/// (d Omega)_ijk = d_i J_jk + d_j J_ki + d_k J_ij, fully antisymmetric. Uses
/// the outer step since coefficients are often derived numerically.
inline Tensor3 exterior_derivative(const TwoForm& form, const Vector& y) {
    const auto n = static_cast<std::size_t>(form.dim());
    std::vector<Matrix> dj;
    auto f = [&form](const Vector& v) { return form(v); };
    for (std::size_t i = 0; i < n; ++i) {
        const auto I = static_cast<Eigen::Index>(i);
        dj.push_back(fd::partial(f, y, I, fd::scaled_step(form.steps().second, y(I))));
    }
    Tensor3 out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const auto I = static_cast<Eigen::Index>(i), J = static_cast<Eigen::Index>(j), K = static_cast<Eigen::Index>(k);
                out(i, j, k) = dj[i](J, K) + dj[j](K, I) + dj[k](I, J);
            }
    return out;
}

inline double closedness_residual(const TwoForm& form, const std::vector<Vector>& samples) {
    double worst = 0.0;
    for (const auto& y : samples) worst = std::max(worst, exterior_derivative(form, y).max_abs());
    return worst;
}

/// Differential form on R^d with coefficient callbacks keyed by the bitmask
/// of an increasing index set.
class DifferentialForm {
public:
    using Coefficient = std::function<double(const Vector&)>;

    explicit DifferentialForm(int dim) : dim_(dim) {}

    static DifferentialForm function(int dim, Coefficient f) {
        DifferentialForm w(dim);
        w.terms_[0u] = std::move(f);
        return w;
    }

    int dim() const noexcept { return dim_; }
    const std::map<unsigned, Coefficient>& terms() const noexcept { return terms_; }

    DifferentialForm& add(unsigned mask, Coefficient f) {
        auto it = terms_.find(mask);
        if (it == terms_.end()) {
            terms_.emplace(mask, std::move(f));
        } else {
            it->second = [a = it->second, b = std::move(f)](const Vector& x) { return a(x) + b(x); };
        }
        return *this;
    }

    friend DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
        DifferentialForm out = a;
        for (const auto& [mask, f] : b.terms_) out.add(mask, f);
        return out;
    }

    /// Partial exterior derivative along the coordinates in `directions`
    /// (a bitmask): sum_{s in directions} dx^s ^ d_s.
    DifferentialForm derivative(unsigned directions, double rel) const {
        DifferentialForm out(dim_);
        for (const auto& [mask, f] : terms_) {
            for (int s = 0; s < dim_; ++s) {
                const unsigned bit = 1u << s;
                if (!(directions & bit) || (mask & bit)) continue;
                const int before = std::popcount(mask & (bit - 1u));
                const double sign = (before % 2 == 0) ? 1.0 : -1.0;
                out.add(mask | bit, [f, s, sign, rel](const Vector& x) {
                    return sign * fd::partial(f, x, s, fd::scaled_step(rel, x(s)));
                });
            }
        }
        return out;
    }

    double max_abs_at(const Vector& x) const {
        double m = 0.0;
        for (const auto& [mask, f] : terms_) m = std::max(m, std::abs(f(x)));
        return m;
    }

private:
    int dim_;
    std::map<unsigned, Coefficient> terms_;
};

struct SplitResiduals {
    double d_plus_squared = 0.0;   ///< (d')^2
    double d_minus_squared = 0.0;  ///< (d'')^2
    double anticommutator = 0.0;   ///< d'd'' + d''d'
    double full_split = 0.0;       ///< d - (d' + d'')
};

/// Residuals of the splitting laws on test forms over adapted coordinates
/// (z+^1..z+^m, z-^1..z-^m). d' differentiates along z+, d'' along z-.
inline SplitResiduals dbar_split_residuals(const std::vector<DifferentialForm>& forms, const std::vector<Vector>& points,
                                           double rel = FdSteps{}.second) {
    SplitResiduals r;
    for (const auto& w : forms) {
        const int d = w.dim();
        if (d % 2 != 0) throw DimensionMismatch("adapted coordinates come in (z+, z-) pairs");
        const unsigned plus = (1u << (d / 2)) - 1u;
        const unsigned minus = ((1u << d) - 1u) & ~plus;
        const auto dp = w.derivative(plus, rel);
        const auto dm = w.derivative(minus, rel);
        const auto dpp = dp.derivative(plus, rel);
        const auto dmm = dm.derivative(minus, rel);
        const auto anti = dm.derivative(plus, rel) + dp.derivative(minus, rel);
        DifferentialForm split = w.derivative(plus | minus, rel);
        const DifferentialForm parts = dp + dm;
        for (const auto& [mask, f] : parts.terms()) split.add(mask, [f](const Vector& x) { return -f(x); });
        for (const auto& x : points) {
            if (x.size() != d) throw DimensionMismatch("sample point vs form dimension");
            r.d_plus_squared = std::max(r.d_plus_squared, dpp.max_abs_at(x));
            r.d_minus_squared = std::max(r.d_minus_squared, dmm.max_abs_at(x));
            r.anticommutator = std::max(r.anticommutator, anti.max_abs_at(x));
            r.full_split = std::max(r.full_split, split.max_abs_at(x));
        }
    }
    return r;
}

/// L = 1/2 C (xi^mu xi_mu - 1) + kappa2 xi^mu A_mu - U(z), indices lowered
/// with lambda / kappa1.
struct LorentzLagrangian {
    double c = 1.0;
    double kappa1 = 1.0;
    double kappa2 = 0.0;
    Vector signature = Vector{{1.0, 1.0, 1.0, -1.0}};
    std::function<Vector(const Vector&)> gauge;      ///< A_mu(z); zero when empty
    std::function<double(const Vector&)> scalar;     ///< U(z); zero when empty
    FdSteps steps{};

    void validate() const {
        for (Eigen::Index i = 0; i < signature.size(); ++i)
            if (std::abs(std::abs(signature(i)) - 1.0) > 0.0) throw InvariantViolation("signature entries must be +-1");
        if (c == 0.0) throw InvariantViolation("C must be nonzero");
        if (kappa1 == 0.0) throw InvariantViolation("kappa1 must be nonzero");
    }

    Matrix metric() const { return Matrix(signature.asDiagonal()) / kappa1; }

    Vector gauge_at(const Vector& z) const { return gauge ? gauge(z) : Vector::Zero(signature.size()); }
    double scalar_at(const Vector& z) const { return scalar ? scalar(z) : 0.0; }

    double operator()(const Vector& xi, const Vector& z) const {
        return 0.5 * c * (xi.dot(metric() * xi) - 1.0) + kappa2 * xi.dot(gauge_at(z)) - scalar_at(z);
    }
};

struct LegendreResult {
    Vector momentum; ///< p_mu = C xi_mu + kappa2 A_mu
    Vector force;    ///< f_mu = kappa2 xi^nu d_mu A_nu - d_mu U
    double hamiltonian = 0.0; ///< xi^mu p_mu - L
};

inline LegendreResult legendre_hamiltonian(const LorentzLagrangian& lag, const Vector& xi, const Vector& z) {
    lag.validate();
    const Eigen::Index n = lag.signature.size();
    require_same_size(static_cast<std::size_t>(xi.size()), static_cast<std::size_t>(n), "velocity vs signature");
    require_same_size(static_cast<std::size_t>(z.size()), static_cast<std::size_t>(n), "position vs signature");
    LegendreResult out;
    out.momentum = lag.c * (lag.metric() * xi) + lag.kappa2 * lag.gauge_at(z);
    out.force = Vector::Zero(n);
    if (lag.gauge && lag.kappa2 != 0.0) {
        for (Eigen::Index mu = 0; mu < n; ++mu) {
            const Vector da = fd::partial(lag.gauge, z, mu, fd::scaled_step(lag.steps.first, z(mu)));
            out.force(mu) += lag.kappa2 * xi.dot(da);
        }
    }
    if (lag.scalar) out.force -= fd::gradient(lag.scalar, z, lag.steps.first);
    out.hamiltonian = xi.dot(out.momentum) - lag(xi, z);
    return out;
}

/// xi from p: g^-1 (p - kappa2 A) / C.
inline Vector velocity_from_momentum(const LorentzLagrangian& lag, const Vector& p, const Vector& z) {
    lag.validate();
    return lag.metric().inverse() * (p - lag.kappa2 * lag.gauge_at(z)) / lag.c;
}

/// H(z, p) = (p - kappa2 A)^T g^-1 (p - kappa2 A) / (2C) + C/2 + U.
inline double hamiltonian_of_momentum(const LorentzLagrangian& lag, const Vector& p, const Vector& z) {
    const Vector v = p - lag.kappa2 * lag.gauge_at(z);
    return v.dot(lag.metric().inverse() * v) / (2.0 * lag.c) + 0.5 * lag.c + lag.scalar_at(z);
}

/// Solves X^i J_ij = d_j H at y. The form dimension must equal the flat size of y.
inline Vector hamiltonian_vector_field(const Observable& h, const TwoForm& form, const PhasePoint& y) {
    const Vector flat = y.flatten();
    const Matrix j = form(flat);
    const Matrix jt = j.transpose();
    const Matrix inv = checked_inverse<DegenerateForm>(jt, "two-form");
    return inv * h.gradient(y).flatten();
}

/// 1/2 g^ij(z) p_i p_j + U(z).
inline double quadratic_energy(const geo::MetricField& metric, const PhasePoint& y,
                               const std::function<double(const Vector&)>& scalar = {}) {
    require_same_size(static_cast<std::size_t>(y.p.size()), static_cast<std::size_t>(metric.dim()), "momentum vs metric");
    const Matrix ginv = metric.inverse(y.z);
    return 0.5 * y.p.dot(ginv * y.p) + (scalar ? scalar(y.z) : 0.0);
}

/// H(z, p) = T(p) + V(z) with explicit gradients.
struct SeparableHamiltonian {
    std::function<double(const Vector&)> kinetic;
    std::function<Vector(const Vector&)> kinetic_gradient;
    std::function<double(const Vector&)> potential;
    std::function<Vector(const Vector&)> potential_gradient;

    double operator()(const Vector& z, const Vector& p) const { return kinetic(p) + potential(z); }

    /// 1/2 p^T M^-1 p + 1/2 z^T K z.
    static SeparableHamiltonian quadratic(const Matrix& inverse_mass, const Matrix& stiffness) {
        return {[inverse_mass](const Vector& p) { return 0.5 * p.dot(inverse_mass * p); },
                [inverse_mass](const Vector& p) { return Vector(inverse_mass * p); },
                [stiffness](const Vector& z) { return 0.5 * z.dot(stiffness * z); },
                [stiffness](const Vector& z) { return Vector(stiffness * z); }};
    }
};

struct TrajectoryRecord {
    double s;
    Vector z;
    Vector p;
    double energy;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    double max_energy_drift = 0.0;

    /// CSV with header s,z0..,p0..,H; 17 significant digits.
    void write_csv(std::ostream& os) const {
        if (records.empty()) return;
        const auto n = records.front().z.size();
        os << "s";
        for (Eigen::Index i = 0; i < n; ++i) os << ",z" << i;
        for (Eigen::Index i = 0; i < n; ++i) os << ",p" << i;
        os << ",H\n";
        const auto old = os.precision(17);
        for (const auto& r : records) {
            os << r.s;
            for (Eigen::Index i = 0; i < n; ++i) os << ',' << r.z(i);
            for (Eigen::Index i = 0; i < n; ++i) os << ',' << r.p(i);
            os << ',' << r.energy << '\n';
        }
        os.precision(old);
    }
};

namespace detail {
inline void record(Trajectory& t, double s, const Vector& z, const Vector& p, double e) {
    t.records.push_back({s, z, p, e});
    t.max_energy_drift = std::max(t.max_energy_drift, std::abs(e - t.records.front().energy));
}
} // namespace detail

/// Kick-drift-kick leapfrog.
inline Trajectory integrate(const SeparableHamiltonian& h, const PhasePoint& y0, double dt, std::size_t steps) {
    require_same_size(static_cast<std::size_t>(y0.z.size()), static_cast<std::size_t>(y0.p.size()), "positions vs momenta");
    Trajectory t;
    t.records.reserve(steps + 1);
    Vector z = y0.z, p = y0.p;
    detail::record(t, 0.0, z, p, h(z, p));
    for (std::size_t k = 1; k <= steps; ++k) {
        p -= 0.5 * dt * h.potential_gradient(z);
        z += dt * h.kinetic_gradient(p);
        p -= 0.5 * dt * h.potential_gradient(z);
        detail::record(t, static_cast<double>(k) * dt, z, p, h(z, p));
    }
    return t;
}

inline constexpr double kImplicitMidpointTolerance = 1e-12;
inline constexpr int kImplicitMidpointMaxIterations = 50;

/// Implicit midpoint rule for a general H(z, p) with canonical equations,
/// solved by fixed-point iteration.
inline Trajectory integrate(const Observable& h, const PhasePoint& y0, double dt, std::size_t steps) {
    require_same_size(static_cast<std::size_t>(y0.z.size()), static_cast<std::size_t>(y0.p.size()), "positions vs momenta");
    const Eigen::Index n = y0.z.size();
    auto field = [&](const Vector& y) {
        const PhasePoint g = h.gradient(PhasePoint::unflatten(y, y0));
        Vector x(y.size());
        x << g.p, -g.z, Vector::Zero(y0.spin.size());
        return x;
    };
    Trajectory t;
    t.records.reserve(steps + 1);
    Vector y = y0.flatten();
    detail::record(t, 0.0, y.head(n), y.segment(n, n), h(y0));
    for (std::size_t k = 1; k <= steps; ++k) {
        Vector next = y + dt * field(y);
        bool converged = false;
        for (int it = 0; it < kImplicitMidpointMaxIterations; ++it) {
            const Vector update = y + dt * field(0.5 * (y + next));
            const double change = (update - next).lpNorm<Eigen::Infinity>();
            next = update;
            if (change <= kImplicitMidpointTolerance * std::max(1.0, next.lpNorm<Eigen::Infinity>())) {
                converged = true;
                break;
            }
        }
        if (!converged) throw NonConvergence("implicit midpoint iteration did not converge");
        y = next;
        const PhasePoint yp = PhasePoint::unflatten(y, y0);
        detail::record(t, static_cast<double>(k) * dt, yp.z, yp.p, h(yp));
    }
    return t;
}

} // namespace frobsym::symp
