#pragma once

// Spec loading: JSON text or file -> validated ManifoldSpec.

#include <fstream>
#include <sstream>
#include <string>

#include "checks.hpp"
#include "spec.hpp"

namespace frobsym::cli {

namespace detail {

/// 1-based line and column of a 1-based byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace detail

inline ManifoldSpec spec_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("top level must be an object");
    json_in::only_keys(j, "", {"name", "kind", "payload", "checks", "tolerances", "seed"});
    ManifoldSpec spec;
    spec.kind = kind_from_string(json_in::string(json_in::required(j, "", "kind"), "kind"));
    if (j.contains("name")) spec.name = json_in::string(j["name"], "name");
    const Json& payload = json_in::required(j, "", "payload");
    if (!payload.is_object()) throw SchemaError("payload: expected an object");
    validate_payload(spec.kind, payload);
    spec.payload = payload;
    if (j.contains("checks")) {
        if (!j["checks"].is_array()) throw SchemaError("checks: expected an array of names");
        for (const auto& c : j["checks"]) {
            const auto name = json_in::string(c, "checks[]");
            validate_check(spec.kind, spec.payload, name);
            if (std::find(spec.checks.begin(), spec.checks.end(), name) != spec.checks.end())
                throw SchemaError("checks: duplicate entry '" + name + "'");
            spec.checks.push_back(name);
        }
    }
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) throw SchemaError("tolerances: expected an object");
        for (const auto& [key, value] : j["tolerances"].items()) {
            check_definition(spec.kind, key);
            const double v = json_in::number(value, "tolerances." + key);
            if (!(v > 0.0)) throw SchemaError("tolerances." + key + ": must be positive");
            spec.tolerances[key] = v;
        }
    }
    if (j.contains("seed")) {
        const Json& s = j["seed"];
        if (!s.is_number_unsigned()) throw SchemaError("seed: expected a non-negative integer");
        spec.seed = s.get<std::uint64_t>();
    }
    return spec;
}

/// Malformed JSON raises ParseError with a 1-based line and column;
/// structural problems raise SchemaError.
inline ManifoldSpec load_manifold_spec(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = detail::line_column(text, e.byte);
        throw ParseError(e.what(), line, col);
    }
    return spec_from_json(j);
}

inline ManifoldSpec load_manifold_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open spec file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_manifold_spec(buf.str());
}

} // namespace frobsym::cli
