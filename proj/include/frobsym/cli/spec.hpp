#pragma once

// Manifold spec files: a JSON object
//
//   {
//     "name": "bernoulli",
//     "kind": "exponential_family" | "cone_potential" | "explicit_metric" | "algebra" | "lattice",
//     "payload": { ...kind specific... },
//     "checks": ["cumulants", ...],
//     "tolerances": {"cumulants": 1e-6},     // optional overrides, must be > 0
//     "seed": 7                              // optional, default 0
//   }
//
// Payload fields per kind are listed in README.md.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../errors.hpp"

namespace frobsym::cli {

using Json = nlohmann::json;

enum class Kind { ExponentialFamily, ConePotential, ExplicitMetric, Algebra, Lattice };

inline const char* to_string(Kind k) {
    switch (k) {
    case Kind::ExponentialFamily: return "exponential_family";
    case Kind::ConePotential: return "cone_potential";
    case Kind::ExplicitMetric: return "explicit_metric";
    case Kind::Algebra: return "algebra";
    case Kind::Lattice: return "lattice";
    }
    return "?";
}

inline Kind kind_from_string(const std::string& s) {
    for (Kind k : {Kind::ExponentialFamily, Kind::ConePotential, Kind::ExplicitMetric, Kind::Algebra, Kind::Lattice})
        if (s == to_string(k)) return k;
    throw SchemaError("kind: unknown value '" + s + "'");
}

struct ManifoldSpec {
    std::string name;
    Kind kind = Kind::ExponentialFamily;
    Json payload = Json::object();
    std::vector<std::string> checks;
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 0;

    /// Canonical JSON form (sorted keys); the basis of the spec hash.
    Json to_json() const {
        Json j;
        j["name"] = name;
        j["kind"] = to_string(kind);
        j["payload"] = payload;
        j["checks"] = checks;
        j["tolerances"] = Json::object();
        for (const auto& [k, v] : tolerances) j["tolerances"][k] = v;
        j["seed"] = seed;
        return j;
    }
};

/// FNV-1a 64-bit hash of the canonical dump, as 16 hex digits.
inline std::string spec_hash(const ManifoldSpec& spec) {
    const std::string text = spec.to_json().dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

} // namespace frobsym::cli
