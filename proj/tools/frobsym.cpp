// frobsym: run verification batteries on manifold specs.
//
//   frobsym check SPEC [--tol-scale F] [--fd-step H] [--seed N] [--report human|machine] [--out PATH]
//   frobsym catalog [NAME] [--all] [--print]
//   frobsym checks
//
// Exit status: 0 when every non-skipped check passes, 1 when a check fails,
// 2 on usage, parse or schema errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "frobsym/cli/catalog.hpp"
#include "frobsym/cli/report.hpp"

using namespace frobsym;

namespace {

struct OutputOptions {
    std::string format = "human";
    std::string out;
};

void emit(const cli::Report& report, const OutputOptions& o) {
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out, std::ios::binary);
        if (!file) throw SchemaError("cannot open output file '" + o.out + "'");
    }
    std::ostream& os = o.out.empty() ? std::cout : file;
    if (o.format == "machine") {
        cli::write_machine(os, report);
    } else {
        cli::write_human(os, report);
    }
}

void add_run_options(CLI::App* cmd, cli::RunOptions& run, OutputOptions& out, std::optional<std::uint64_t>& seed,
                     std::optional<double>& fd_step, bool& no_timing) {
    cmd->add_option("--tol-scale", run.tol_scale, "Multiply every tolerance by F")->check(CLI::PositiveNumber);
    cmd->add_option("--fd-step", fd_step, "Relative first-derivative step for finite differences");
    cmd->add_option("--seed", seed, "Override the spec seed");
    cmd->add_option("--threads", run.threads, "Worker threads (default FROBSYM_THREADS or hardware)");
    cmd->add_option("--report", out.format, "Report format")->check(CLI::IsMember({"human", "machine"}));
    cmd->add_option("--out", out.out, "Write the report to PATH instead of stdout");
    cmd->add_flag("--no-timing", no_timing, "Record runtime_ms as 0 for byte-identical reports");
}

int run_fixture(const cli::Fixture& f, cli::RunOptions run, const OutputOptions& out) {
    const auto report = cli::run_battery(f.spec(), run);
    emit(report, out);
    return report.exit_code();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"frobsym: numerical checks for statistical manifolds, Frobenius structures and symplectic geometry"};
    app.require_subcommand(1);

    cli::RunOptions run;
    OutputOptions out;
    std::optional<std::uint64_t> seed;
    std::optional<double> fd_step;
    bool no_timing = false;

    auto* check = app.add_subcommand("check", "Run the checks listed in a spec file");
    std::string spec_path;
    check->add_option("spec", spec_path, "Path to a manifold spec (JSON)")->required();
    add_run_options(check, run, out, seed, fd_step, no_timing);

    auto* cat = app.add_subcommand("catalog", "List or run the built-in fixtures");
    std::string fixture;
    bool all = false, print = false;
    cat->add_option("name", fixture, "Fixture to run");
    cat->add_flag("--all", all, "Run every fixture and compare with its expected outcome");
    cat->add_flag("--print", print, "Print the fixture spec instead of running it");
    add_run_options(cat, run, out, seed, fd_step, no_timing);

    auto* list = app.add_subcommand("checks", "List the available checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    run.seed = seed;
    run.fd_step = fd_step;
    run.timing = !no_timing;

    try {
        if (*check) {
            const auto report = cli::run_battery(cli::load_manifold_spec_file(spec_path), run);
            emit(report, out);
            return report.exit_code();
        }
        if (*list) {
            for (const auto& [name, def] : cli::check_registry()) {
                std::string kinds;
                for (const auto& [kind, runner] : def.runners) kinds += (kinds.empty() ? "" : ",") + std::string(cli::to_string(kind));
                std::printf("%-28s %-10.3g %-52s %s\n", name.c_str(), def.tolerance, kinds.c_str(), def.anchor.c_str());
            }
            return 0;
        }
        if (all) {
            if (!fixture.empty()) throw SchemaError("--all takes no fixture name");
            bool ok = true;
            for (const auto& f : cli::catalog()) {
                const auto report = cli::run_battery(f.spec(), run);
                const bool match = report.passed() == f.expect_pass;
                ok = ok && match;
                std::printf("%-24s expected %-4s got %-4s %s\n", f.name.c_str(), f.expect_pass ? "pass" : "fail",
                            report.passed() ? "pass" : "fail", match ? "ok" : "MISMATCH");
            }
            std::printf("%s\n", ok ? "catalog: all fixtures behave as expected" : "catalog: unexpected outcomes");
            return ok ? 0 : 1;
        }
        if (fixture.empty()) {
            for (const auto& f : cli::catalog())
                std::printf("%-24s %-6s %s\n", f.name.c_str(), f.expect_pass ? "pass" : "fail", f.description.c_str());
            return 0;
        }
        const auto* f = cli::find_fixture(fixture);
        if (!f) throw SchemaError("unknown fixture '" + fixture + "'");
        if (print) {
            std::cout << f->spec().to_json().dump(2) << '\n';
            return 0;
        }
        return run_fixture(*f, run, out);
    } catch (const Error& e) {
        std::cerr << "frobsym: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "frobsym: " << e.what() << '\n';
        return 2;
    }
}
