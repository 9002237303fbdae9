#pragma once

// Built-in fixtures. Each carries the outcome it is expected to produce, so
// `frobsym catalog --all` doubles as a regression run: it succeeds when every
// fixture behaves as expected, including the one built to fail.

#include <string>
#include <vector>

#include "load.hpp"

namespace frobsym::cli {

struct Fixture {
    std::string name;
    std::string description;
    bool expect_pass = true;
    std::string spec_text;

    ManifoldSpec spec() const { return load_manifold_spec(spec_text); }
};

inline const std::vector<Fixture>& catalog() {
    static const std::vector<Fixture> fixtures{
        {"bernoulli", "two-outcome exponential family at beta = 0", true, R"({
  "name": "bernoulli",
  "kind": "exponential_family",
  "payload": {"statistics": [[0, 1]], "point": [0]},
  "checks": ["gibbs_normalization", "cumulants", "cumulant4", "metric_pd", "legendre_roundtrip",
             "dual_connections", "pairing_invariance"],
  "seed": 1
})"},
        {"categorical3", "three-outcome categorical family", true, R"({
  "name": "categorical3",
  "kind": "exponential_family",
  "payload": {"statistics": [[0, 1, 0], [0, 0, 1]], "point": [0.3, -0.2]},
  "checks": ["gibbs_normalization", "cumulants", "cumulant4", "metric_pd", "legendre_roundtrip",
             "dual_connections", "pairing_invariance"],
  "seed": 2
})"},
        {"ising1d", "one-dimensional phase space with a single abelian spin", true, R"({
  "name": "ising1d",
  "kind": "algebra",
  "payload": {"structure_constants": [[[0]]], "phase_dim": 1},
  "checks": ["spin_jacobi", "bracket_properties"],
  "seed": 3
})"},
        {"orthant_cone", "cone potential 1 / (x_1 ... x_n) for n = 2 and 3", true, R"({
  "name": "orthant_cone",
  "kind": "cone_potential",
  "payload": {"potential": "orthant", "dims": [2, 3]},
  "checks": ["metric_pd", "flatness", "cone_unit", "frobenius_axioms", "automorphism_invariance",
             "shear_detection"],
  "seed": 4
})"},
        {"trivial_wdvv3", "cubic potential with a flat identity and antidiagonal metric", true, R"({
  "name": "trivial_wdvv3",
  "kind": "explicit_metric",
  "payload": {"metric": "antidiagonal", "dim": 3, "potential": "trivial_wdvv3"},
  "checks": ["wdvv", "frobenius_axioms", "flatness"],
  "seed": 5
})"},
        {"perturbed_wdvv3", "cubic potential plus 0.1 x2^2 x3^2, which breaks WDVV", false, R"({
  "name": "perturbed_wdvv3",
  "kind": "explicit_metric",
  "payload": {"metric": "antidiagonal", "dim": 3, "potential": "perturbed_wdvv3",
              "points": [[0, 1, 1], [0.3, -0.7, 1.1]]},
  "checks": ["wdvv"],
  "seed": 6
})"},
        {"harmonic_oscillator", "H = p^2 / 2 + z^2 / 2 integrated by leapfrog", true, R"({
  "name": "harmonic_oscillator",
  "kind": "explicit_metric",
  "payload": {"metric": "euclidean", "dim": 1, "scalar": "harmonic",
              "integrator": {"dt": 0.001, "steps": 10000, "initial": [1, 0]}},
  "checks": ["energy_drift", "drift_order", "vector_field", "evolution_consistency", "bracket_properties"],
  "seed": 7
})"},
        {"linear_hydro_lattice", "hydrodynamic bracket with g^ij = delta^ij u^i on periodic lattices", true, R"({
  "name": "linear_hydro_lattice",
  "kind": "lattice",
  "payload": {"metric": "linear_diagonal", "components": 2, "sites": [16, 64]},
  "checks": ["novikov_symmetrization", "lattice_jacobi_ratio", "lattice_antisymmetry_ratio"],
  "seed": 8
})"},
        {"constant_hydro_lattice", "hydrodynamic bracket with a constant metric", true, R"({
  "name": "constant_hydro_lattice",
  "kind": "lattice",
  "payload": {"metric": "constant", "components": 2, "constant": [[1, 0.5], [0.5, 2]], "sites": [16, 32]},
  "checks": ["lattice_skew", "lattice_jacobi", "novikov_symmetrization"],
  "seed": 9
})"},
        {"heisenberg3", "spin brackets with so(3) structure constants", true, R"({
  "name": "heisenberg3",
  "kind": "algebra",
  "payload": {"structure_constants": [[[0, 0, 0], [0, 0, 1], [0, -1, 0]],
                                      [[0, 0, -1], [0, 0, 0], [1, 0, 0]],
                                      [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]],
              "phase_dim": 1},
  "checks": ["spin_jacobi", "bracket_properties"],
  "seed": 10
})"},
        {"paracomplex_plane", "paracomplex numbers as a rank-2 Frobenius algebra", true, R"({
  "name": "paracomplex_plane",
  "kind": "algebra",
  "payload": {"structure_constants": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
              "pairing": [[1, 0], [0, 1]]},
  "checks": ["frobenius_axioms", "idempotents", "novikov"],
  "seed": 11
})"},
        {"unit_normal2", "two-dimensional potential x1^2 x2 / 2 + exp(x2)", true, R"({
  "name": "unit_normal2",
  "kind": "explicit_metric",
  "payload": {"metric": "antidiagonal", "dim": 2, "potential": "unit_normal2"},
  "checks": ["wdvv", "frobenius_axioms"],
  "seed": 12
})"},
        {"flat_pencil2", "contravariant metric g^12 = u^1 and its pencil", true, R"({
  "name": "flat_pencil2",
  "kind": "explicit_metric",
  "payload": {"metric": "offdiag_linear2", "pencil": {"direction": 0, "lambdas": [-2, -0.5, 0.3, 1, 2.5]}},
  "checks": ["flat_pencil", "metric_compatibility"],
  "seed": 13
})"},
        {"lorentz_particle", "free relativistic particle with signature (+, +, +, -)", true, R"({
  "name": "lorentz_particle",
  "kind": "explicit_metric",
  "payload": {"metric": "minkowski", "lagrangian": {"c": 1, "kappa1": 1, "kappa2": 0}},
  "checks": ["legendre_consistency", "flatness"],
  "seed": 14
})"},
        {"paracomplex_kahler", "paracomplex 2-form of a quartic potential in four real dimensions", true, R"({
  "name": "paracomplex_kahler",
  "kind": "explicit_metric",
  "payload": {"metric": "euclidean", "dim": 4, "potential": "dolbeault_quartic"},
  "checks": ["closedness", "dbar_split"],
  "seed": 15
})"},
        {"round_sphere", "unit two-sphere, which must be detected as curved", true, R"({
  "name": "round_sphere",
  "kind": "explicit_metric",
  "payload": {"metric": "round_sphere"},
  "checks": ["metric_pd", "metric_compatibility", "curvature_detected"],
  "seed": 16
})"},
    };
    return fixtures;
}

inline const Fixture* find_fixture(const std::string& name) {
    for (const auto& f : catalog())
        if (f.name == name) return &f;
    return nullptr;
}

} // namespace frobsym::cli
