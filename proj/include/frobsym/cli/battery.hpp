#pragma once

// Runs the checks of a spec on a small thread pool. Rows keep the order of the
// spec's check list, and every check draws its samples from a generator seeded
// by (seed, check name), so reports do not depend on scheduling.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "checks.hpp"
#include "spec.hpp"

namespace frobsym::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Status { Pass, Fail, Skipped };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
    }
    return "?";
}

inline Status status_from_string(const std::string& s) {
    for (Status st : {Status::Pass, Status::Fail, Status::Skipped})
        if (s == to_string(st)) return st;
    throw SchemaError("unknown status '" + s + "'");
}

struct CheckRow {
    std::string name;
    Status status = Status::Fail;
    double residual = 0.0;
    double tolerance = 0.0;
    double runtime_ms = 0.0;
    std::string anchor;
    std::string detail;

    bool operator==(const CheckRow&) const = default;
};

struct RunOptions {
    double tol_scale = 1.0;
    std::optional<double> fd_step;     ///< overrides the first-derivative step
    std::optional<std::uint64_t> seed; ///< overrides the spec seed
    std::size_t threads = 0;           ///< 0: FROBSYM_THREADS or hardware concurrency
    bool timing = true;                ///< false records runtime_ms = 0
};

struct Report {
    std::string spec_name;
    std::string kind;
    std::string spec_hash;
    std::uint64_t seed = 0;
    double tol_scale = 1.0;
    std::optional<double> fd_step;
    std::vector<CheckRow> rows;

    std::size_t count(Status s) const {
        return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [s](const CheckRow& r) { return r.status == s; }));
    }
    /// True when every non-skipped check passed.
    bool passed() const { return count(Status::Fail) == 0; }
    int exit_code() const { return passed() ? 0 : 1; }

    bool operator==(const Report&) const = default;
};

/// FROBSYM_THREADS when set to a positive integer, else hardware concurrency.
inline std::size_t default_threads() {
    if (const char* env = std::getenv("FROBSYM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline std::uint64_t name_stream(const std::string& name) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline CheckRow run_check(const ManifoldSpec& spec, const std::string& name, const RunOptions& opt, std::uint64_t seed) {
    const auto& def = check_definition(spec.kind, name);
    CheckRow row;
    row.name = name;
    row.anchor = def.anchor;
    const auto tol_it = spec.tolerances.find(name);
    row.tolerance = (tol_it == spec.tolerances.end() ? def.tolerance : tol_it->second) * opt.tol_scale;

    FdSteps steps;
    if (opt.fd_step) steps.first = *opt.fd_step;
    CheckContext ctx{spec, steps, Rng(seed, name_stream(name))};

    const auto start = std::chrono::steady_clock::now();
    CheckOutcome out;
    try {
        out = def.runners.at(spec.kind)(ctx);
    } catch (const std::exception& e) {
        out = {kInf, std::string("error: ") + e.what(), false};
    }
    const auto stop = std::chrono::steady_clock::now();
    if (opt.timing) row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();

    row.residual = out.residual;
    row.detail = out.detail;
    if (out.skipped) {
        row.status = Status::Skipped;
    } else {
        row.status = out.residual <= row.tolerance ? Status::Pass : Status::Fail;
    }
    return row;
}

inline Report run_battery(const ManifoldSpec& spec, const RunOptions& opt = {}) {
    if (!(opt.tol_scale > 0.0) || !std::isfinite(opt.tol_scale)) throw SchemaError("tolerance scale must be positive");
    if (opt.fd_step && !(*opt.fd_step > 0.0 && *opt.fd_step < 1.0)) throw SchemaError("finite-difference step must lie in (0, 1)");

    Report rep;
    rep.spec_name = spec.name;
    rep.kind = to_string(spec.kind);
    rep.spec_hash = spec_hash(spec);
    rep.seed = opt.seed.value_or(spec.seed);
    rep.tol_scale = opt.tol_scale;
    rep.fd_step = opt.fd_step;
    rep.rows.resize(spec.checks.size());

    const std::size_t workers = std::min(opt.threads ? opt.threads : default_threads(), std::max<std::size_t>(1, spec.checks.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < spec.checks.size(); i = next++) rep.rows[i] = run_check(spec, spec.checks[i], opt, rep.seed);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return rep;
}

} // namespace frobsym::cli
