#pragma once

// The check table: every named check with its anchor (the property it
// verifies), its default tolerance and one runner per applicable kind. A check
// passes when residual <= tolerance. Checks that must detect a defect larger
// than T report residual = 1 / defect with tolerance 1 / T.

#include <array>
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "../frobenius.hpp"
#include "../geometry.hpp"
#include "../poisson.hpp"
#include "../statmanifold.hpp"
#include "../symplectic.hpp"
#include "payload.hpp"

namespace frobsym::cli {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// mt19937_64 with a portable uniform map (53 high bits).
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    Vector point(Eigen::Index n, const SampleBox& box) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto [lo, hi] = box.range(i);
            v(i) = uniform(lo, hi);
        }
        return v;
    }

    std::vector<Vector> points(Eigen::Index n, const SampleBox& box, Eigen::Index count) {
        std::vector<Vector> out;
        for (Eigen::Index k = 0; k < count; ++k) out.push_back(point(n, box));
        return out;
    }

private:
    std::mt19937_64 engine_;
};

struct CheckContext {
    const ManifoldSpec& spec;
    FdSteps steps;
    Rng rng;
};

struct CheckOutcome {
    double residual = 0.0;
    std::string detail;
    bool skipped = false;
};

using Runner = std::function<CheckOutcome(CheckContext&)>;
/// Throws SchemaError when the payload lacks what the check needs.
using Requirement = std::function<void(Kind, const Json&)>;

struct CheckDef {
    std::string anchor;
    double tolerance = 1e-10;
    std::map<Kind, Runner> runners;
    Requirement requirement;
};

namespace checks {

/// lambda_max / lambda_min of a symmetric matrix; infinite unless positive definite.
inline double pd_condition(const Matrix& g) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.transpose()));
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    return lo > 0.0 ? hi / lo : kInf;
}

inline double axioms_worst(const frob::FrobeniusAlgebra& alg) {
    const auto r = frob::frobenius_axioms(alg);
    return std::max({r.commutativity, r.associativity, r.invariance});
}

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

inline CheckOutcome detection(double defect, const std::string& what) {
    return {defect > 0.0 ? 1.0 / defect : kInf, what + " = " + sci(defect)};
}

// Polynomial test observables on (z, p, Lambda) with analytic gradients.
inline std::array<Observable, 3> test_observables() {
    auto blank = [](const PhasePoint& y) {
        return PhasePoint(Vector::Zero(y.z.size()), Vector::Zero(y.p.size()), Vector::Zero(y.spin.size()));
    };
    auto next = [](Eigen::Index i, Eigen::Index n) { return (i + 1) % n; };
    auto prev = [](Eigen::Index i, Eigen::Index n) { return (i + n - 1) % n; };
    // A = sum (i+1) z_i p_i^2 + sum L_k L_{k+1}
    Observable a(
        [next](const PhasePoint& y) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < y.z.size(); ++i) s += static_cast<double>(i + 1) * y.z(i) * y.p(i) * y.p(i);
            const Eigen::Index m = y.spin.size();
            for (Eigen::Index k = 0; k < m; ++k) s += y.spin(k) * y.spin(next(k, m));
            return s;
        },
        [blank, next, prev](const PhasePoint& y) {
            PhasePoint g = blank(y);
            for (Eigen::Index i = 0; i < y.z.size(); ++i) {
                const double c = static_cast<double>(i + 1);
                g.z(i) = c * y.p(i) * y.p(i);
                g.p(i) = 2.0 * c * y.z(i) * y.p(i);
            }
            const Eigen::Index m = y.spin.size();
            for (Eigen::Index k = 0; k < m; ++k) g.spin(k) = y.spin(next(k, m)) + y.spin(prev(k, m));
            return g;
        });
    // B = sum z_i^2 p_{i+1} + z_0 sum (k+1) L_k
    Observable b(
        [next](const PhasePoint& y) {
            const Eigen::Index n = y.z.size();
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) s += y.z(i) * y.z(i) * y.p(next(i, n));
            for (Eigen::Index k = 0; k < y.spin.size(); ++k) s += y.z(0) * static_cast<double>(k + 1) * y.spin(k);
            return s;
        },
        [blank, next, prev](const PhasePoint& y) {
            const Eigen::Index n = y.z.size();
            PhasePoint g = blank(y);
            double weighted = 0.0;
            for (Eigen::Index k = 0; k < y.spin.size(); ++k) {
                weighted += static_cast<double>(k + 1) * y.spin(k);
                g.spin(k) = static_cast<double>(k + 1) * y.z(0);
            }
            for (Eigen::Index i = 0; i < n; ++i) {
                g.z(i) = 2.0 * y.z(i) * y.p(next(i, n));
                g.p(i) = y.z(prev(i, n)) * y.z(prev(i, n));
            }
            g.z(0) += weighted;
            return g;
        });
    // C = sum p_i z_{i+1} + p_0 sum L_k^2 + sum L_k
    Observable c(
        [next](const PhasePoint& y) {
            const Eigen::Index n = y.z.size();
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) s += y.p(i) * y.z(next(i, n));
            for (Eigen::Index k = 0; k < y.spin.size(); ++k) s += y.p(0) * y.spin(k) * y.spin(k) + y.spin(k);
            return s;
        },
        [blank, next, prev](const PhasePoint& y) {
            const Eigen::Index n = y.z.size();
            PhasePoint g = blank(y);
            for (Eigen::Index i = 0; i < n; ++i) {
                g.z(i) = y.p(prev(i, n));
                g.p(i) = y.z(next(i, n));
            }
            for (Eigen::Index k = 0; k < y.spin.size(); ++k) {
                g.p(0) += y.spin(k) * y.spin(k);
                g.spin(k) = 2.0 * y.p(0) * y.spin(k) + 1.0;
            }
            return g;
        });
    return {a, b, c};
}

inline std::vector<PhasePoint> phase_samples(Rng& rng, Eigen::Index n, Eigen::Index m, Eigen::Index count) {
    std::vector<PhasePoint> out;
    const SampleBox box{};
    for (Eigen::Index k = 0; k < count; ++k) out.emplace_back(rng.point(n, box), rng.point(n, box), rng.point(m, box));
    return out;
}

inline CheckOutcome bracket_properties(const poisson::Bracket& br, Eigen::Index n, Eigen::Index m, CheckContext& ctx) {
    const auto [a, b, c] = test_observables();
    const auto r = poisson::bracket_property_residuals(br, a, b, c, phase_samples(ctx.rng, n, m, 3), ctx.steps.first);
    return {r.worst(), "antisymmetry " + sci(r.antisymmetry) + ", chain " + sci(r.chain_rule) + ", leibniz " +
                           sci(r.leibniz) + ", jacobi " + sci(r.jacobi)};
}

// ---- exponential families ----

inline constexpr std::array<double, 5> kCumulantSteps{0.0, 1e-3, 5e-3, 1e-2, 3e-2};

struct Family {
    FamilyPayload payload;
    stat::ExponentialFamily fam;

    explicit Family(const ManifoldSpec& spec)
        : payload(FamilyPayload::parse(spec.payload)), fam(payload.statistics, payload.base_measure) {}
};

/// max over entries of |FD - exact| relative to the largest exact entry.
inline double cumulant_mismatch(const stat::ExponentialFamily& fam, const Vector& beta, std::size_t k) {
    const auto t = stat::cumulant_tensor(fam, beta, k);
    double worst = 0.0, scale = 0.0;
    const std::function<double(const Vector&)> phi = [&fam](const Vector& b) { return stat::potential(fam, b); };
    t.for_each_index([&](std::span<const std::size_t> idx) {
        const std::vector<Eigen::Index> ii(idx.begin(), idx.end());
        worst = std::max(worst, std::abs(fd::mixed_partial(phi, beta, ii, kCumulantSteps[k]) - t.at(idx)));
        scale = std::max(scale, std::abs(t.at(idx)));
    });
    return scale > 1e-12 ? worst / scale : worst;
}

inline std::vector<Vector> family_points(const Family& f, Rng& rng) {
    std::vector<Vector> pts{f.payload.point};
    for (const auto& v : rng.points(f.payload.point.size(), SampleBox{-2.0, 2.0, {}}, 4)) pts.push_back(v);
    return pts;
}

inline CheckOutcome ef_gibbs(CheckContext& ctx) {
    const Family f(ctx.spec);
    double worst = 0.0;
    for (const auto& b : family_points(f, ctx.rng)) worst = std::max(worst, std::abs(stat::gibbs_density(f.fam, b).sum() - 1.0));
    return {worst, ""};
}

inline CheckOutcome ef_cumulants(CheckContext& ctx, std::size_t lo, std::size_t hi) {
    const Family f(ctx.spec);
    double worst = 0.0;
    std::string detail;
    for (std::size_t k = lo; k <= hi; ++k) {
        const double r = cumulant_mismatch(f.fam, f.payload.point, k);
        worst = std::max(worst, r);
        detail += (detail.empty() ? "" : ", ") + std::string("order ") + std::to_string(k) + " " + sci(r);
    }
    return {worst, detail};
}

inline CheckOutcome ef_metric_pd(CheckContext& ctx) {
    const Family f(ctx.spec);
    return {pd_condition(stat::fisher_metric(f.fam, f.payload.point)), "condition number"};
}

inline CheckOutcome ef_legendre(CheckContext& ctx) {
    const Family f(ctx.spec);
    double worst = 0.0;
    for (const auto& b : family_points(f, ctx.rng)) {
        const auto dual = stat::dual_coordinates(f.fam, b);
        const Vector back = stat::natural_from_dual(f.fam, dual.eta);
        worst = std::max(worst, (back - b).lpNorm<Eigen::Infinity>());
        worst = std::max(worst, std::abs(stat::dual_potential(f.fam, dual.eta, b) - dual.psi));
    }
    return {worst, "beta -> eta -> beta and dual potential"};
}

inline CheckOutcome ef_dual_connections(CheckContext& ctx) {
    const Family f(ctx.spec);
    const auto d = geo::dual_connections(f.fam, f.payload.point, ctx.steps);
    return {std::max({d.duality_residual, d.exponential_curvature, d.mixture_curvature}),
            "duality " + sci(d.duality_residual) + ", e-curvature " + sci(d.exponential_curvature) +
                ", m-curvature " + sci(d.mixture_curvature)};
}

inline CheckOutcome ef_pairing_invariance(CheckContext& ctx) {
    const Family f(ctx.spec);
    const auto& b = f.payload.point;
    const auto alg = frob::algebra_from_potential(stat::cumulant_tensor(f.fam, b, 3), stat::fisher_metric(f.fam, b));
    const auto r = frob::frobenius_axioms(alg);
    return {std::max(r.commutativity, r.invariance), ""};
}

// ---- cone potentials ----

template <class F>
CheckOutcome over_cones(CheckContext& ctx, F&& per_dim) {
    const auto p = ConePayload::parse(ctx.spec.payload);
    const auto& entry = lookup(potential_registry(), p.potential, "payload.potential");
    double worst = 0.0;
    std::string detail;
    for (auto n : p.dims) {
        const auto phi = entry.make(n, ctx.steps);
        const auto pts = ctx.rng.points(n, entry.box, p.samples);
        const double r = per_dim(phi, pts, p, n);
        worst = std::max(worst, r);
        detail += (detail.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + " " + sci(r);
    }
    return {worst, detail};
}

inline frob::FrobeniusAlgebra cone_algebra(const geo::PotentialField& phi, const Vector& x) {
    const auto metric = geo::hessian_log_metric(phi);
    Tensor3 c = geo::christoffel(metric, x) * -1.0;
    return frob::FrobeniusAlgebra(std::move(c), metric(x));
}

inline Runner cone_metric_pd() {
    return [](CheckContext& ctx) {
        return over_cones(ctx, [](const geo::PotentialField& phi, const std::vector<Vector>& pts, const ConePayload&, Eigen::Index) {
            const auto metric = geo::hessian_log_metric(phi);
            double worst = 0.0;
            for (const auto& x : pts) worst = std::max(worst, pd_condition(metric(x)));
            return worst;
        });
    };
}

inline Runner cone_flatness() {
    return [](CheckContext& ctx) {
        return over_cones(ctx, [](const geo::PotentialField& phi, const std::vector<Vector>& pts, const ConePayload&, Eigen::Index) {
            return geo::curvature_flatness(geo::hessian_log_metric(phi), pts).max_riemann;
        });
    };
}

inline Runner cone_unit() {
    return [](CheckContext& ctx) {
        return over_cones(ctx, [](const geo::PotentialField& phi, const std::vector<Vector>& pts, const ConePayload&, Eigen::Index n) {
            double worst = 0.0;
            for (const auto& x : pts) {
                const auto alg = cone_algebra(phi, x);
                for (Eigen::Index i = 0; i < n; ++i) {
                    const Vector a = Vector::Unit(n, i);
                    worst = std::max(worst, (alg.multiply(x, a) - a).lpNorm<Eigen::Infinity>());
                }
            }
            return worst;
        });
    };
}

inline Runner cone_axioms() {
    return [](CheckContext& ctx) {
        return over_cones(ctx, [](const geo::PotentialField& phi, const std::vector<Vector>& pts, const ConePayload&, Eigen::Index) {
            double worst = 0.0;
            for (const auto& x : pts) worst = std::max(worst, axioms_worst(cone_algebra(phi, x)));
            return worst;
        });
    };
}

inline Runner cone_automorphism() {
    return [](CheckContext& ctx) {
        return over_cones(ctx, [](const geo::PotentialField& phi, const std::vector<Vector>& pts, const ConePayload& p, Eigen::Index n) {
            return geo::automorphism_invariance_residual(phi, Matrix(p.scales.head(n).asDiagonal()), pts);
        });
    };
}

inline Runner cone_shear() {
    return [](CheckContext& ctx) {
        const auto p = ConePayload::parse(ctx.spec.payload);
        const auto& entry = lookup(potential_registry(), p.potential, "payload.potential");
        double smallest = kInf;
        for (auto n : p.dims) {
            if (n < 2) return CheckOutcome{0.0, "needs dimension >= 2", true};
            Matrix a = Matrix::Identity(n, n);
            a(0, 1) = 1.0;
            smallest = std::min(smallest, geo::automorphism_invariance_residual(entry.make(n, ctx.steps), a, {Vector::Ones(n)}));
        }
        return detection(smallest, "shear defect");
    };
}

// ---- explicit metrics ----

struct MetricSetup {
    MetricPayload payload;
    geo::MetricField metric;
    std::optional<geo::PotentialField> potential;
    std::vector<Vector> points;

    MetricSetup(CheckContext& ctx)
        : payload(MetricPayload::parse(ctx.spec.payload)),
          metric(lookup(metric_registry(), payload.metric, "payload.metric").make(payload.dim, ctx.steps)) {
        SampleBox box = lookup(metric_registry(), payload.metric, "payload.metric").box;
        if (payload.potential) {
            const auto& entry = lookup(potential_registry(), *payload.potential, "payload.potential");
            potential = entry.make(payload.dim, ctx.steps);
            box = entry.box;
        }
        points = payload.points.empty() ? ctx.rng.points(payload.dim, box, payload.samples) : payload.points;
    }
};

inline CheckOutcome em_metric_pd(CheckContext& ctx) {
    const MetricSetup s(ctx);
    double worst = 0.0;
    for (const auto& x : s.points) worst = std::max(worst, pd_condition(s.metric(x)));
    return {worst, "condition number"};
}

inline CheckOutcome em_flatness(CheckContext& ctx) {
    const MetricSetup s(ctx);
    return {geo::curvature_flatness(s.metric, s.points).max_riemann, ""};
}

inline CheckOutcome em_curvature_detected(CheckContext& ctx) {
    const MetricSetup s(ctx);
    return detection(geo::curvature_flatness(s.metric, s.points).max_riemann, "max |R|");
}

inline CheckOutcome em_compatibility(CheckContext& ctx) {
    const MetricSetup s(ctx);
    double worst = 0.0;
    for (const auto& x : s.points) worst = std::max(worst, geo::metric_compatibility_residual(s.metric, x));
    return {worst, ""};
}

inline CheckOutcome em_wdvv(CheckContext& ctx) {
    const MetricSetup s(ctx);
    double worst = 0.0, raw = 0.0;
    for (const auto& x : s.points) {
        const auto r = frob::wdvv_residual(*s.potential, s.metric, x);
        worst = std::max(worst, r.relative());
        raw = std::max(raw, r.max_abs);
    }
    return {worst, "relative; absolute " + sci(raw)};
}

inline CheckOutcome em_axioms(CheckContext& ctx) {
    const MetricSetup s(ctx);
    double worst = 0.0;
    for (const auto& x : s.points) worst = std::max(worst, axioms_worst(frob::algebra_from_potential(s.potential->third(x), s.metric(x))));
    return {worst, ""};
}

inline CheckOutcome em_pencil(CheckContext& ctx) {
    const MetricSetup s(ctx);
    const auto rep = geo::flat_pencil_check(s.metric, s.payload.pencil->direction, s.payload.pencil->lambdas, s.points);
    return {rep.worst(), std::to_string(rep.residual_combinations.size()) + " combinations"};
}

inline CheckOutcome em_closedness(CheckContext& ctx) {
    const MetricSetup s(ctx);
    const auto form = symp::paracomplex_two_form(s.payload.dim / 2, symp::dolbeault_coefficients(*s.potential), ctx.steps);
    return {symp::closedness_residual(form, s.points), ""};
}

inline CheckOutcome em_dbar(CheckContext& ctx) {
    const MetricSetup s(ctx);
    const int d = static_cast<int>(s.payload.dim);
    const geo::PotentialField phi = *s.potential;
    const auto zero_form = symp::DifferentialForm::function(d, [phi](const Vector& x) { return phi(x); });
    symp::DifferentialForm one_form(d);
    one_form.add(1u, [phi](const Vector& x) { return phi(x); });
    one_form.add(1u << (d - 1), [d](const Vector& x) { return x(0) * x(d / 2); });
    const auto r = symp::dbar_split_residuals({zero_form, one_form}, s.points, ctx.steps.second);
    return {std::max({r.d_plus_squared, r.d_minus_squared, r.anticommutator, r.full_split}),
            "d'^2 " + sci(r.d_plus_squared) + ", d''^2 " + sci(r.d_minus_squared) + ", anticommutator " +
                sci(r.anticommutator) + ", split " + sci(r.full_split)};
}

inline CheckOutcome em_legendre(CheckContext& ctx) {
    const MetricSetup s(ctx);
    const Vector origin = Vector::Zero(s.payload.dim);
    const Matrix g = s.metric(origin);
    if (max_abs(Matrix(g - Matrix(g.diagonal().asDiagonal()))) > 0.0 || ((g.diagonal().array().abs() - 1.0).abs() > 0.0).any())
        return {kInf, "metric must be diagonal with entries +-1"};
    symp::LorentzLagrangian lag;
    lag.signature = g.diagonal();
    if (s.payload.lagrangian) {
        lag.c = s.payload.lagrangian->c;
        lag.kappa1 = s.payload.lagrangian->kappa1;
        lag.kappa2 = s.payload.lagrangian->kappa2;
    }
    double worst = 0.0;
    for (const auto& xi : ctx.rng.points(s.payload.dim, SampleBox{}, 4)) {
        const auto r = symp::legendre_hamiltonian(lag, xi, origin);
        worst = std::max(worst, (symp::velocity_from_momentum(lag, r.momentum, origin) - xi).lpNorm<Eigen::Infinity>());
        worst = std::max(worst, std::abs(symp::hamiltonian_of_momentum(lag, r.momentum, origin) - r.hamiltonian));
    }
    return {worst, "velocity round trip and H(p) = xi p - L"};
}

/// 1/2 p^T g^-1 p + U(z) for a constant metric.
struct Mechanics {
    symp::SeparableHamiltonian h;
    Observable energy;
    PhasePoint y0;
    IntegratorPayload integrator;
};

inline std::optional<Mechanics> mechanics(const MetricSetup& s) {
    const Eigen::Index n = s.payload.dim;
    const Vector origin = s.points.front();
    for (const auto& dg : s.metric.derivatives(origin))
        if (max_abs(dg) != 0.0) return std::nullopt;
    const Matrix minv = s.metric.inverse(origin);
    const auto& u = lookup(scalar_registry(), s.payload.scalar, "payload.scalar");
    symp::SeparableHamiltonian h{[minv](const Vector& p) { return 0.5 * p.dot(minv * p); },
                                 [minv](const Vector& p) { return Vector(minv * p); }, u.value, u.gradient};
    Observable energy([h](const PhasePoint& y) { return h(y.z, y.p); },
                      [h](const PhasePoint& y) { return PhasePoint(h.potential_gradient(y.z), h.kinetic_gradient(y.p), Vector::Zero(y.spin.size())); });
    const auto& ip = *s.payload.integrator;
    return Mechanics{h, energy, PhasePoint(ip.initial.head(n), ip.initial.tail(n)), ip};
}

inline const CheckOutcome kNeedsConstantMetric{kInf, "integrator checks need a constant metric"};

inline CheckOutcome em_vector_field(CheckContext& ctx) {
    const MetricSetup s(ctx);
    const auto m = mechanics(s);
    if (!m) return kNeedsConstantMetric;
    const Vector x = symp::hamiltonian_vector_field(m->energy, symp::canonical_two_form(s.payload.dim), m->y0);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::abs(x(i) - poisson::canonical_bracket(m->energy, Observable::coordinate(i), m->y0)));
    return {worst, "X^i versus {H, y^i}"};
}

inline CheckOutcome em_energy_drift(CheckContext& ctx) {
    const MetricSetup s(ctx);
    const auto m = mechanics(s);
    if (!m) return kNeedsConstantMetric;
    const auto t = symp::integrate(m->h, m->y0, m->integrator.dt, m->integrator.steps);
    return {t.max_energy_drift, std::to_string(m->integrator.steps) + " leapfrog steps"};
}

inline CheckOutcome em_drift_order(CheckContext& ctx) {
    const MetricSetup s(ctx);
    const auto m = mechanics(s);
    if (!m) return kNeedsConstantMetric;
    const double d1 = symp::integrate(m->h, m->y0, m->integrator.dt, m->integrator.steps).max_energy_drift;
    const double d2 = symp::integrate(m->h, m->y0, m->integrator.dt / 10.0, 10 * m->integrator.steps).max_energy_drift;
    if (d1 == 0.0 && d2 == 0.0) return {0.0, "energy conserved exactly"};
    if (!(d2 > 0.0)) return {kInf, "drift vanished only at the finer step"};
    const double order = std::log10(d1 / d2);
    return {std::abs(order - 2.0), "observed order " + sci(order)};
}

inline CheckOutcome em_evolution(CheckContext& ctx) {
    const MetricSetup s(ctx);
    const auto m = mechanics(s);
    if (!m) return kNeedsConstantMetric;
    const Observable q(
        [](const PhasePoint& y) { return y.z.dot(y.p) + y.z(0) * y.z(0); },
        [](const PhasePoint& y) {
            Vector gz = y.p;
            gz(0) += 2.0 * y.z(0);
            return PhasePoint(gz, y.z, Vector::Zero(y.spin.size()));
        });
    constexpr double delta = 1e-4;
    const auto fwd = symp::integrate(m->h, m->y0, delta, 1).records.back();
    const auto bwd = symp::integrate(m->h, m->y0, -delta, 1).records.back();
    const double rate = (q(PhasePoint(fwd.z, fwd.p)) - q(PhasePoint(bwd.z, bwd.p))) / (2.0 * delta);
    return {std::abs(rate - poisson::evolution_derivative(m->energy, q, m->y0)), ""};
}

inline CheckOutcome em_brackets(CheckContext& ctx) {
    const MetricSetup s(ctx);
    return bracket_properties(poisson::canonical(), s.payload.dim, 0, ctx);
}

// ---- algebras ----

inline frob::FrobeniusAlgebra payload_algebra(const AlgebraPayload& p) {
    const auto m = static_cast<Eigen::Index>(p.constants.dim());
    return frob::FrobeniusAlgebra(p.constants, p.pairing.value_or(Matrix::Identity(m, m)));
}

inline CheckOutcome al_axioms(CheckContext& ctx) {
    return {axioms_worst(payload_algebra(AlgebraPayload::parse(ctx.spec.payload))), ""};
}

inline CheckOutcome al_idempotents(CheckContext& ctx) {
    const auto p = AlgebraPayload::parse(ctx.spec.payload);
    if (p.constants.dim() != 2) return {0.0, "rank-2 algebras only", true};
    const auto alg = payload_algebra(p);
    const auto found = frob::find_idempotents_rank2(alg);
    double worst = 0.0;
    for (const auto& a : found) worst = std::max(worst, (alg.multiply(a, a) - a).lpNorm<Eigen::Infinity>());
    return {worst, std::to_string(found.size()) + " idempotents"};
}

inline CheckOutcome al_novikov(CheckContext& ctx) {
    const auto p = AlgebraPayload::parse(ctx.spec.payload);
    const auto m = static_cast<Eigen::Index>(p.constants.dim());
    const auto r = frob::novikov_residuals(p.constants, geo::MetricField::constant(Matrix::Identity(m, m)), Vector::Zero(m));
    return {std::max(r.left_symmetry, r.right_identity),
            "left symmetry " + sci(r.left_symmetry) + ", right identity " + sci(r.right_identity)};
}

inline CheckOutcome al_spin_jacobi(CheckContext& ctx) {
    const auto p = AlgebraPayload::parse(ctx.spec.payload);
    return {poisson::StructureConstants(p.constants).jacobi_defect(), ""};
}

inline CheckOutcome al_brackets(CheckContext& ctx) {
    const auto p = AlgebraPayload::parse(ctx.spec.payload);
    return bracket_properties(poisson::extended(poisson::StructureConstants(p.constants)), p.phase_dim,
                              static_cast<Eigen::Index>(p.constants.dim()), ctx);
}

// ---- lattices ----

inline poisson::LatticeBracket make_lattice(const LatticePayload& p, Eigen::Index sites) {
    return p.metric == "constant" ? poisson::LatticeBracket::constant(sites, p.constant)
                                  : poisson::LatticeBracket::linear_diagonal(sites, p.components);
}

inline poisson::LatticeResiduals lattice_at(const LatticePayload& p, Eigen::Index sites) {
    const auto lb = make_lattice(p, sites);
    return poisson::lattice_hydro_bracket(lb, poisson::lattice_smooth_state(lb));
}

inline CheckOutcome lattice_ratio(CheckContext& ctx, double poisson::LatticeResiduals::*field) {
    const auto p = LatticePayload::parse(ctx.spec.payload);
    const double coarse = lattice_at(p, p.sites.front()).*field;
    const double fine = lattice_at(p, p.sites.back()).*field;
    const std::string sizes = "N=" + std::to_string(p.sites.front()) + " " + sci(coarse) + ", N=" +
                              std::to_string(p.sites.back()) + " " + sci(fine);
    if (coarse <= 1e-13) return {0.0, sizes + " (vanishes)"};
    return {fine / coarse, sizes};
}

inline CheckOutcome lattice_finest(CheckContext& ctx, double poisson::LatticeResiduals::*field) {
    const auto p = LatticePayload::parse(ctx.spec.payload);
    return {lattice_at(p, p.sites.back()).*field, "N=" + std::to_string(p.sites.back())};
}

inline CheckOutcome lattice_symmetrization(CheckContext& ctx) {
    const auto p = LatticePayload::parse(ctx.spec.payload);
    const auto lb = make_lattice(p, p.sites.front());
    const Eigen::Index r = p.components;
    const geo::MetricField g =
        p.metric == "constant" ? geo::MetricField::constant(p.constant) : metric_registry().at("linear_diagonal").make(r, ctx.steps);
    const Vector u = Vector::LinSpaced(r, 2.0, 2.0 + 0.5 * static_cast<double>(r - 1));
    return {frob::novikov_residuals(lb.b(), g, u).symmetrization, ""};
}

// ---- requirements ----

inline Requirement needs(std::string key) {
    return [key](Kind, const Json& payload) {
        if (!payload.contains(key)) throw SchemaError("payload." + key + ": required by this check");
    };
}

inline Requirement needs_even_potential() {
    return [](Kind, const Json& payload) {
        needs("potential")(Kind::ExplicitMetric, payload);
        if (MetricPayload::parse(payload).dim % 2 != 0) throw SchemaError("payload.dim: this check needs an even dimension");
    };
}

inline Requirement needs_refinement() {
    return [](Kind, const Json& payload) {
        if (LatticePayload::parse(payload).sites.size() < 2) throw SchemaError("payload.sites: this check needs two lattice sizes");
    };
}

} // namespace checks

inline const std::map<std::string, CheckDef>& check_registry() {
    using namespace checks;
    using K = Kind;
    static const std::map<std::string, CheckDef> reg{
        {"gibbs_normalization", {"Gibbs weights sum to one", 1e-12, {{K::ExponentialFamily, ef_gibbs}}, {}}},
        {"cumulants",
         {"log-partition derivatives of order 1-3 against finite differences", 1e-6,
          {{K::ExponentialFamily, [](CheckContext& c) { return ef_cumulants(c, 1, 3); }}}, {}}},
        {"cumulant4",
         {"fourth log-partition derivative against finite differences", 1e-4,
          {{K::ExponentialFamily, [](CheckContext& c) { return ef_cumulants(c, 4, 4); }}}, {}}},
        {"metric_pd",
         {"positive definite metric; residual is the condition number", kMaxCondition,
          {{K::ExponentialFamily, ef_metric_pd}, {K::ConePotential, cone_metric_pd()}, {K::ExplicitMetric, em_metric_pd}}, {}}},
        {"legendre_roundtrip", {"Legendre duality of natural and dual coordinates", 1e-8, {{K::ExponentialFamily, ef_legendre}}, {}}},
        {"dual_connections", {"dual flat exponential and mixture connections", 1e-6, {{K::ExponentialFamily, ef_dual_connections}}, {}}},
        {"pairing_invariance",
         {"Fisher pairing is invariant for the cubic-form multiplication", 1e-10, {{K::ExponentialFamily, ef_pairing_invariance}}, {}}},
        {"flatness", {"vanishing Riemann tensor", 1e-6, {{K::ConePotential, cone_flatness()}, {K::ExplicitMetric, em_flatness}}, {}}},
        {"curvature_detected",
         {"nonzero Riemann tensor; residual is 1 / max|R|", 10.0, {{K::ExplicitMetric, em_curvature_detected}}, {}}},
        {"metric_compatibility", {"Levi-Civita connection preserves the metric", 1e-6, {{K::ExplicitMetric, em_compatibility}}, {}}},
        {"cone_unit", {"position vector is the unit of a o b = -Gamma(a, b)", 1e-10, {{K::ConePotential, cone_unit()}}, {}}},
        {"frobenius_axioms",
         {"commutative associative algebra with invariant pairing", 1e-10,
          {{K::ConePotential, cone_axioms()}, {K::ExplicitMetric, em_axioms}, {K::Algebra, al_axioms}},
          [](Kind k, const Json& p) {
              if (k == Kind::ExplicitMetric) needs("potential")(k, p);
              if (k == Kind::Algebra) needs("pairing")(k, p);
          }}},
        {"automorphism_invariance",
         {"ln phi(Ax) = ln phi(x) - ln det A for diagonal cone automorphisms", 1e-10, {{K::ConePotential, cone_automorphism()}}, {}}},
        {"shear_detection",
         {"a shear is not a cone automorphism; residual is 1 / defect", 10.0, {{K::ConePotential, cone_shear()}}, {}}},
        {"wdvv", {"WDVV associativity equations, relative residual", 1e-8, {{K::ExplicitMetric, em_wdvv}}, needs("potential")}},
        {"flat_pencil", {"g and g + lambda dg/dx^a are flat", 1e-6, {{K::ExplicitMetric, em_pencil}}, needs("pencil")}},
        {"closedness", {"paracomplex 2-form of a potential is closed", 1e-5, {{K::ExplicitMetric, em_closedness}}, needs_even_potential()}},
        {"dbar_split",
         {"d = d' + d'' with d'^2 = d''^2 = d'd'' + d''d' = 0", 1e-5, {{K::ExplicitMetric, em_dbar}}, needs_even_potential()}},
        {"legendre_consistency",
         {"Legendre transform of the Lorentz Lagrangian and its inverse", 1e-10, {{K::ExplicitMetric, em_legendre}}, {}}},
        {"vector_field",
         {"Hamiltonian vector field of the symplectic form matches {H, y^i}", 1e-10, {{K::ExplicitMetric, em_vector_field}},
          needs("integrator")}},
        {"energy_drift",
         {"energy conservation of the leapfrog integrator", 1e-6, {{K::ExplicitMetric, em_energy_drift}}, needs("integrator")}},
        {"drift_order",
         {"energy error is second order in the step; residual is |order - 2|", 0.1, {{K::ExplicitMetric, em_drift_order}},
          needs("integrator")}},
        {"evolution_consistency",
         {"dQ/dt = {H, Q} along the integrated flow", 1e-6, {{K::ExplicitMetric, em_evolution}}, needs("integrator")}},
        {"bracket_properties",
         {"antisymmetry, chain rule, Leibniz rule and Jacobi identity", 1e-6,
          {{K::ExplicitMetric, em_brackets}, {K::Algebra, al_brackets}}, {}}},
        {"idempotents", {"idempotents of a rank-2 algebra", 1e-10, {{K::Algebra, al_idempotents}}, {}}},
        {"novikov", {"Novikov identities (left symmetry, right identity)", 1e-10, {{K::Algebra, al_novikov}}, {}}},
        {"spin_jacobi", {"Jacobi identity of the spin structure constants", 1e-10, {{K::Algebra, al_spin_jacobi}}, {}}},
        {"lattice_skew",
         {"entrywise skew-symmetry of the discrete bracket", 1e-10,
          {{K::Lattice, [](CheckContext& c) { return lattice_finest(c, &poisson::LatticeResiduals::skew); }}}, {}}},
        {"lattice_jacobi",
         {"Jacobi identity of the discrete bracket", 1e-10,
          {{K::Lattice, [](CheckContext& c) { return lattice_finest(c, &poisson::LatticeResiduals::jacobi); }}}, {}}},
        {"lattice_jacobi_ratio",
         {"Jacobi defect shrinks under refinement; residual is fine / coarse", 0.25,
          {{K::Lattice, [](CheckContext& c) { return lattice_ratio(c, &poisson::LatticeResiduals::jacobi); }}}, needs_refinement()}},
        {"lattice_antisymmetry_ratio",
         {"antisymmetry defect shrinks under refinement; residual is fine / coarse", 0.25,
          {{K::Lattice, [](CheckContext& c) { return lattice_ratio(c, &poisson::LatticeResiduals::weak_antisymmetry); }}},
          needs_refinement()}},
        {"novikov_symmetrization",
         {"b^ij_k + b^ji_k = dg^ij / du^k", 1e-10, {{K::Lattice, lattice_symmetrization}}, {}}},
    };
    return reg;
}

inline const CheckDef& check_definition(Kind kind, const std::string& name) {
    const auto& reg = check_registry();
    const auto it = reg.find(name);
    if (it == reg.end()) throw SchemaError("unknown check '" + name + "'");
    if (!it->second.runners.count(kind)) throw SchemaError("check '" + name + "' does not apply to kind " + to_string(kind));
    return it->second;
}

/// Validates a check name and its payload requirements.
inline void validate_check(Kind kind, const Json& payload, const std::string& name) {
    const auto& def = check_definition(kind, name);
    if (def.requirement) def.requirement(kind, payload);
}

} // namespace frobsym::cli
