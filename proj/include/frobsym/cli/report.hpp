#pragma once

// Report output. The machine format is JSON Lines: one header record, one
// record per check in spec order, one summary record. Keys keep a fixed order
// and non-finite residuals are written as the strings "inf", "-inf", "nan".

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "battery.hpp"

namespace frobsym::cli {

using OrderedJson = nlohmann::ordered_json;

namespace detail {

inline OrderedJson encode_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double decode_number(const OrderedJson& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw SchemaError(std::string("report field '") + what + "' is not a number");
}

inline std::string sci(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

} // namespace detail

inline void write_machine(std::ostream& os, const Report& r) {
    OrderedJson head;
    head["record"] = "header";
    head["tool"] = "frobsym";
    head["version"] = kToolVersion;
    head["spec"] = r.spec_name;
    head["kind"] = r.kind;
    head["spec_hash"] = r.spec_hash;
    head["seed"] = r.seed;
    head["tol_scale"] = r.tol_scale;
    head["fd_step"] = r.fd_step ? OrderedJson(*r.fd_step) : OrderedJson(nullptr);
    head["checks"] = r.rows.size();
    os << head.dump() << '\n';
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& row = r.rows[i];
        OrderedJson j;
        j["record"] = "check";
        j["index"] = i;
        j["name"] = row.name;
        j["status"] = to_string(row.status);
        j["residual"] = detail::encode_number(row.residual);
        j["tolerance"] = detail::encode_number(row.tolerance);
        j["runtime_ms"] = row.runtime_ms;
        j["anchor"] = row.anchor;
        j["detail"] = row.detail;
        os << j.dump() << '\n';
    }
    OrderedJson tail;
    tail["record"] = "summary";
    tail["passed"] = r.count(Status::Pass);
    tail["failed"] = r.count(Status::Fail);
    tail["skipped"] = r.count(Status::Skipped);
    tail["exit_status"] = r.exit_code();
    os << tail.dump() << '\n';
}

inline std::string machine_report(const Report& r) {
    std::ostringstream os;
    write_machine(os, r);
    return os.str();
}

/// Inverse of write_machine.
inline Report parse_machine_report(const std::string& text) {
    Report r;
    std::istringstream in(text);
    std::string line;
    bool header = false, summary = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        OrderedJson j;
        try {
            j = OrderedJson::parse(line);
        } catch (const OrderedJson::parse_error& e) {
            throw SchemaError(std::string("report line is not JSON: ") + e.what());
        }
        const auto kind = j.value("record", std::string());
        if (kind == "header") {
            r.spec_name = j.at("spec").get<std::string>();
            r.kind = j.at("kind").get<std::string>();
            r.spec_hash = j.at("spec_hash").get<std::string>();
            r.seed = j.at("seed").get<std::uint64_t>();
            r.tol_scale = j.at("tol_scale").get<double>();
            if (!j.at("fd_step").is_null()) r.fd_step = j.at("fd_step").get<double>();
            header = true;
        } else if (kind == "check") {
            CheckRow row;
            row.name = j.at("name").get<std::string>();
            row.status = status_from_string(j.at("status").get<std::string>());
            row.residual = detail::decode_number(j.at("residual"), "residual");
            row.tolerance = detail::decode_number(j.at("tolerance"), "tolerance");
            row.runtime_ms = j.at("runtime_ms").get<double>();
            row.anchor = j.at("anchor").get<std::string>();
            row.detail = j.at("detail").get<std::string>();
            r.rows.push_back(std::move(row));
        } else if (kind == "summary") {
            summary = true;
        } else {
            throw SchemaError("unknown report record '" + kind + "'");
        }
    }
    if (!header || !summary) throw SchemaError("report is missing its header or summary record");
    return r;
}

inline void write_human(std::ostream& os, const Report& r) {
    os << "spec " << (r.spec_name.empty() ? "(unnamed)" : r.spec_name) << "  kind " << r.kind << "  hash " << r.spec_hash << "  seed "
       << r.seed << '\n';
    std::size_t width = 5;
    for (const auto& row : r.rows) width = std::max(width, row.name.size());
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s  %-7s  %-10s  %-10s  %9s  %s\n", static_cast<int>(width), "check", "status", "residual",
                  "tolerance", "time_ms", "anchor");
    os << buf;
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%-*s  %-7s  %-10s  %-10s  %9.1f  ", static_cast<int>(width), row.name.c_str(),
                      row.status == Status::Fail ? "FAIL" : to_string(row.status), detail::sci(row.residual).c_str(),
                      detail::sci(row.tolerance).c_str(), row.runtime_ms);
        os << buf << row.anchor;
        if (!row.detail.empty()) os << " [" << row.detail << ']';
        os << '\n';
    }
    os << r.count(Status::Pass) << " passed, " << r.count(Status::Fail) << " failed, " << r.count(Status::Skipped) << " skipped\n";
}

} // namespace frobsym::cli
