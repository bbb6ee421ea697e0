// pfcs_main.cpp
// Batch front door: `pfcs run <config>`, `pfcs verify [--suite NAME]`,
// `pfcs sweep <config>`. Exit codes: 0 ok, 2 config error, 3 numerical
// failure, 4 verification failure.

#include <iostream>

#include <CLI11.hpp>

#include "pfcs/acceptance.hpp"
#include "pfcs/runner.hpp"
#include "pfcs/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pfcs — conserved phase-field simulator with Yosida-regularized dynamics"};
    app.set_version_flag("--version", std::string(pfcs::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string sweep_config_path;
    std::string suite_filter;

    CLI::App* run = app.add_subcommand("run", "integrate one trajectory and write artifacts");
    run->add_option("config", config_path, "JSON config or manifest")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the acceptance suites");
    verify->add_option("--suite", suite_filter, "only suites whose name contains this");

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep and write reports");
    sweep->add_option("config", sweep_config_path, "JSON config or manifest with a sweep section")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const pfcs::RunConfig cfg = pfcs::load_config_file(config_path);
            return pfcs::run_command(cfg, pfcs::resolve_output_dir(cfg));
        }
        if (sweep->parsed()) {
            const pfcs::RunConfig cfg = pfcs::load_config_file(sweep_config_path);
            if (!cfg.sweep) throw pfcs::ConfigError("sweep section required", "sweep");
            return pfcs::sweep_command(cfg, pfcs::resolve_output_dir(cfg));
        }
        if (verify->parsed()) {
            const auto results = pfcs::run_acceptance(suite_filter);
            if (results.empty()) {
                std::cerr << "no suite matches '" << suite_filter << "'\n";
                return 4;
            }
            pfcs::print_results(results, std::cout);
            for (const auto& r : results)
                if (!r.pass) return 4;
            return 0;
        }
    } catch (const pfcs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const pfcs::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pfcs::SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const pfcs::StepRejected& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
