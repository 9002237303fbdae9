#pragma once

// Typed views of the kind-specific payload objects. Parsing doubles as
// validation: every malformed field raises SchemaError naming the field.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "../linalg.hpp"
#include "registry.hpp"
#include "spec.hpp"

namespace frobsym::cli {

namespace json_in {

inline std::string field(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline double number(const Json& j, const std::string& what) {
    if (!j.is_number()) throw SchemaError(what + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SchemaError(what + ": must be finite");
    return v;
}

inline Eigen::Index integer(const Json& j, const std::string& what, Eigen::Index min) {
    if (!j.is_number_integer()) throw SchemaError(what + ": expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < min) throw SchemaError(what + ": must be >= " + std::to_string(min));
    return static_cast<Eigen::Index>(v);
}

inline Vector vector(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected a non-empty array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what + "[" + std::to_string(i) + "]");
    return v;
}

inline Matrix matrix(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected a non-empty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const Vector row = vector(j[r], what + "[" + std::to_string(r) + "]");
        if (static_cast<std::size_t>(row.size()) != cols) throw SchemaError(what + ": rows must have equal length");
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

/// t[k][i][j] with all three extents equal.
inline Tensor3 tensor3(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected an m x m x m array");
    const std::size_t m = j.size();
    Tensor3 t(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Matrix slice = matrix(j[k], what + "[" + std::to_string(k) + "]");
        if (static_cast<std::size_t>(slice.rows()) != m || static_cast<std::size_t>(slice.cols()) != m)
            throw SchemaError(what + ": every slice must be m x m");
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) t(k, a, b) = slice(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
    return t;
}

inline std::string string(const Json& j, const std::string& what) {
    if (!j.is_string()) throw SchemaError(what + ": expected a string");
    return j.get<std::string>();
}

inline void only_keys(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw SchemaError(path + ": expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw SchemaError(field(path, key) + ": unknown field");
}

inline const Json& required(const Json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) throw SchemaError(field(path, key) + ": required");
    return obj[key];
}

inline std::vector<Vector> points(const Json& j, const std::string& what, Eigen::Index dim) {
    if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected a non-empty array of points");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        Vector v = vector(j[i], what + "[" + std::to_string(i) + "]");
        if (v.size() != dim) throw SchemaError(what + "[" + std::to_string(i) + "]: expected " + std::to_string(dim) + " coordinates");
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace json_in

inline constexpr Eigen::Index kDefaultSamples = 3;

/// statistics (n x m), optional base_measure (m), optional point (n).
struct FamilyPayload {
    Matrix statistics;
    Vector base_measure;
    Vector point;

    static FamilyPayload parse(const Json& p) {
        json_in::only_keys(p, "payload", {"statistics", "base_measure", "point"});
        FamilyPayload out;
        out.statistics = json_in::matrix(json_in::required(p, "payload", "statistics"), "payload.statistics");
        if (p.contains("base_measure")) {
            out.base_measure = json_in::vector(p["base_measure"], "payload.base_measure");
            if (out.base_measure.size() != out.statistics.cols())
                throw SchemaError("payload.base_measure: length must equal the number of outcomes");
            if ((out.base_measure.array() <= 0.0).any()) throw SchemaError("payload.base_measure: weights must be positive");
        }
        out.point = Vector::Zero(out.statistics.rows());
        if (p.contains("point")) {
            out.point = json_in::vector(p["point"], "payload.point");
            if (out.point.size() != out.statistics.rows()) throw SchemaError("payload.point: length must equal the number of statistics");
        }
        return out;
    }
};

/// potential id, dims, optional automorphism scales and sample count.
struct ConePayload {
    std::string potential;
    std::vector<Eigen::Index> dims{2};
    Vector scales;
    Eigen::Index samples = kDefaultSamples;

    static ConePayload parse(const Json& p) {
        json_in::only_keys(p, "payload", {"potential", "dims", "scales", "samples"});
        ConePayload out;
        out.potential = json_in::string(json_in::required(p, "payload", "potential"), "payload.potential");
        const auto& entry = lookup(potential_registry(), out.potential, "payload.potential");
        if (p.contains("dims")) {
            if (!p["dims"].is_array() || p["dims"].empty()) throw SchemaError("payload.dims: expected a non-empty array");
            out.dims.clear();
            for (const auto& d : p["dims"]) out.dims.push_back(json_in::integer(d, "payload.dims", 1));
        }
        Eigen::Index max_dim = 0;
        for (auto d : out.dims) {
            if (entry.fixed_dim && d != *entry.fixed_dim)
                throw SchemaError("payload.dims: potential '" + out.potential + "' has dimension " + std::to_string(*entry.fixed_dim));
            max_dim = std::max(max_dim, d);
        }
        out.scales = Vector::LinSpaced(max_dim, 2.0, 1.0 + static_cast<double>(max_dim));
        if (p.contains("scales")) {
            out.scales = json_in::vector(p["scales"], "payload.scales");
            if (out.scales.size() < max_dim) throw SchemaError("payload.scales: need one scale per coordinate");
            if ((out.scales.array() <= 0.0).any()) throw SchemaError("payload.scales: must be positive");
        }
        if (p.contains("samples")) out.samples = json_in::integer(p["samples"], "payload.samples", 1);
        return out;
    }
};

struct IntegratorPayload {
    double dt = 1e-3;
    std::size_t steps = 1000;
    Vector initial; ///< (z, p)
};

struct PencilPayload {
    Eigen::Index direction = 0;
    std::vector<double> lambdas;
};

struct LagrangianPayload {
    double c = 1.0;
    double kappa1 = 1.0;
    double kappa2 = 0.0;
};

/// metric id and dimension with optional potential, scalar field, explicit
/// points and sub-objects for the integrator, pencil and Lagrangian checks.
struct MetricPayload {
    std::string metric;
    Eigen::Index dim = 0;
    std::optional<std::string> potential;
    std::string scalar = "zero";
    std::vector<Vector> points;
    Eigen::Index samples = kDefaultSamples;
    std::optional<IntegratorPayload> integrator;
    std::optional<PencilPayload> pencil;
    std::optional<LagrangianPayload> lagrangian;

    static MetricPayload parse(const Json& p) {
        json_in::only_keys(p, "payload", {"metric", "dim", "potential", "scalar", "points", "samples", "integrator", "pencil", "lagrangian"});
        MetricPayload out;
        out.metric = json_in::string(json_in::required(p, "payload", "metric"), "payload.metric");
        const auto& entry = lookup(metric_registry(), out.metric, "payload.metric");
        if (p.contains("dim")) {
            out.dim = json_in::integer(p["dim"], "payload.dim", 1);
        } else if (entry.fixed_dim) {
            out.dim = *entry.fixed_dim;
        } else {
            throw SchemaError("payload.dim: required for metric '" + out.metric + "'");
        }
        if (entry.fixed_dim && out.dim != *entry.fixed_dim)
            throw SchemaError("payload.dim: metric '" + out.metric + "' has dimension " + std::to_string(*entry.fixed_dim));
        if (p.contains("potential")) {
            out.potential = json_in::string(p["potential"], "payload.potential");
            const auto& pot = lookup(potential_registry(), *out.potential, "payload.potential");
            if (pot.fixed_dim && *pot.fixed_dim != out.dim) throw SchemaError("payload.potential: dimension differs from payload.dim");
            if (pot.even_dim && out.dim % 2 != 0) throw SchemaError("payload.potential: needs an even dimension");
        }
        if (p.contains("scalar")) {
            out.scalar = json_in::string(p["scalar"], "payload.scalar");
            lookup(scalar_registry(), out.scalar, "payload.scalar");
        }
        if (p.contains("points")) out.points = json_in::points(p["points"], "payload.points", out.dim);
        if (p.contains("samples")) out.samples = json_in::integer(p["samples"], "payload.samples", 1);
        if (p.contains("integrator")) {
            const Json& q = p["integrator"];
            json_in::only_keys(q, "payload.integrator", {"dt", "steps", "initial"});
            IntegratorPayload ip;
            if (q.contains("dt")) ip.dt = json_in::number(q["dt"], "payload.integrator.dt");
            if (!(ip.dt > 0.0)) throw SchemaError("payload.integrator.dt: must be positive");
            if (q.contains("steps")) ip.steps = static_cast<std::size_t>(json_in::integer(q["steps"], "payload.integrator.steps", 1));
            ip.initial = json_in::vector(json_in::required(q, "payload.integrator", "initial"), "payload.integrator.initial");
            if (ip.initial.size() != 2 * out.dim) throw SchemaError("payload.integrator.initial: expected 2 * dim entries (z then p)");
            out.integrator = ip;
        }
        if (p.contains("pencil")) {
            const Json& q = p["pencil"];
            json_in::only_keys(q, "payload.pencil", {"direction", "lambdas"});
            PencilPayload pp;
            if (q.contains("direction")) pp.direction = json_in::integer(q["direction"], "payload.pencil.direction", 0);
            if (pp.direction >= out.dim) throw SchemaError("payload.pencil.direction: out of range");
            const Vector l = json_in::vector(json_in::required(q, "payload.pencil", "lambdas"), "payload.pencil.lambdas");
            pp.lambdas = to_std(l);
            out.pencil = pp;
        }
        if (p.contains("lagrangian")) {
            const Json& q = p["lagrangian"];
            json_in::only_keys(q, "payload.lagrangian", {"c", "kappa1", "kappa2"});
            LagrangianPayload lp;
            if (q.contains("c")) lp.c = json_in::number(q["c"], "payload.lagrangian.c");
            if (q.contains("kappa1")) lp.kappa1 = json_in::number(q["kappa1"], "payload.lagrangian.kappa1");
            if (q.contains("kappa2")) lp.kappa2 = json_in::number(q["kappa2"], "payload.lagrangian.kappa2");
            if (lp.c == 0.0 || lp.kappa1 == 0.0) throw SchemaError("payload.lagrangian: c and kappa1 must be nonzero");
            out.lagrangian = lp;
        }
        return out;
    }
};

/// structure_constants c[k][i][j] (product e_i e_j = sum_k c^k_ij e_k, or
/// spin brackets gamma^k_ij), optional pairing, phase_dim for spin brackets.
struct AlgebraPayload {
    Tensor3 constants{1};
    std::optional<Matrix> pairing;
    Eigen::Index phase_dim = 1;
    Eigen::Index samples = kDefaultSamples;

    static AlgebraPayload parse(const Json& p) {
        json_in::only_keys(p, "payload", {"structure_constants", "pairing", "phase_dim", "samples"});
        AlgebraPayload out;
        out.constants = json_in::tensor3(json_in::required(p, "payload", "structure_constants"), "payload.structure_constants");
        if (p.contains("pairing")) {
            Matrix g = json_in::matrix(p["pairing"], "payload.pairing");
            if (g.rows() != static_cast<Eigen::Index>(out.constants.dim()) || g.cols() != g.rows())
                throw SchemaError("payload.pairing: must be m x m");
            if (symmetry_defect(g) > 0.0) throw SchemaError("payload.pairing: must be symmetric");
            out.pairing = std::move(g);
        }
        if (p.contains("phase_dim")) out.phase_dim = json_in::integer(p["phase_dim"], "payload.phase_dim", 1);
        if (p.contains("samples")) out.samples = json_in::integer(p["samples"], "payload.samples", 1);
        return out;
    }
};

/// Discretized hydrodynamic bracket on periodic lattices of the given sizes.
struct LatticePayload {
    std::string metric;
    Eigen::Index components = 1;
    std::vector<Eigen::Index> sites{16, 64};
    Matrix constant;

    static LatticePayload parse(const Json& p) {
        json_in::only_keys(p, "payload", {"metric", "components", "sites", "constant"});
        LatticePayload out;
        out.metric = json_in::string(json_in::required(p, "payload", "metric"), "payload.metric");
        if (out.metric != "linear_diagonal" && out.metric != "constant")
            throw SchemaError("payload.metric: lattice metric must be 'linear_diagonal' or 'constant'");
        if (p.contains("components")) out.components = json_in::integer(p["components"], "payload.components", 1);
        if (p.contains("sites")) {
            if (!p["sites"].is_array() || p["sites"].empty()) throw SchemaError("payload.sites: expected a non-empty array");
            out.sites.clear();
            for (const auto& s : p["sites"]) out.sites.push_back(json_in::integer(s, "payload.sites", 4));
            if (!std::is_sorted(out.sites.begin(), out.sites.end()) ||
                std::adjacent_find(out.sites.begin(), out.sites.end()) != out.sites.end())
                throw SchemaError("payload.sites: must be strictly increasing");
        }
        out.constant = Matrix::Identity(out.components, out.components);
        if (p.contains("constant")) {
            if (out.metric != "constant") throw SchemaError("payload.constant: only valid with metric 'constant'");
            out.constant = json_in::matrix(p["constant"], "payload.constant");
            if (out.constant.rows() != out.components || out.constant.cols() != out.components)
                throw SchemaError("payload.constant: must be components x components");
            if (symmetry_defect(out.constant) > 0.0) throw SchemaError("payload.constant: must be symmetric");
        }
        return out;
    }
};

inline void validate_payload(Kind kind, const Json& payload) {
    switch (kind) {
    case Kind::ExponentialFamily: FamilyPayload::parse(payload); break;
    case Kind::ConePotential: ConePayload::parse(payload); break;
    case Kind::ExplicitMetric: MetricPayload::parse(payload); break;
    case Kind::Algebra: AlgebraPayload::parse(payload); break;
    case Kind::Lattice: LatticePayload::parse(payload); break;
    }
}

} // namespace frobsym::cli
