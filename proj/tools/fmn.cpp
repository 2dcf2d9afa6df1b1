// Command-line entry point: execute a verification run from a config file,
// list claim ids, or dump a cube system for reproducibility diffs.
// Exit codes: 0 all asserted claims pass, 1 assertion failure, 2 bad
// configuration or arguments.

#include <CLI11.hpp>
#include <iostream>

#include "fmn/config.hpp"
#include "fmn/fmn.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fractional mean norm certification toolkit"};
    app.require_subcommand(0, 1);

    bool list_claims_flag = false;
    app.add_flag("--list-claims", list_claims_flag, "print claim ids and exit");

    auto* run_cmd = app.add_subcommand("run", "execute a verification run");
    std::string config_path;
    run_cmd->add_option("config", config_path, "run configuration file")->required();
    std::string suite_glob, out_dir;
    std::uint64_t seed = 0;
    bool have_seed = false, emit_plot = false;
    run_cmd->add_option("--suite", suite_glob, "claim id glob (overrides config)");
    run_cmd->add_option("--out", out_dir, "output directory (overrides config)");
    run_cmd->add_option("--seed", seed, "seed (overrides config)")->each([&](const std::string&) {
        have_seed = true;
    });
    run_cmd->add_flag("--emit-plot-data", emit_plot, "write per-radius norm curves");

    auto* dump_cmd = app.add_subcommand("dump-dyadic", "dump a cube system");
    std::string dump_space;
    int dump_m = -2;
    dump_cmd->add_option("space", dump_space, "space generator spec or file")->required();
    dump_cmd->add_option("--m", dump_m, "finest generation (default -2)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_claims_flag) {
            for (const auto& info : fmn::list_claims())
                std::cout << info.id << "  [" << info.kind << "]  " << info.formula << "\n";
            return 0;
        }
        if (*dump_cmd) {
            auto s = fmn::build_space(dump_space);
            fmn::DyadicSystem sys(s, dump_m);
            fmn::dump_cube_system(sys, std::cout);
            return 0;
        }
        if (*run_cmd) {
            auto cfg = fmn::parse_config_file(config_path);
            if (!suite_glob.empty()) cfg.suite_glob = suite_glob;
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            if (have_seed) cfg.seed = seed;
            if (emit_plot) cfg.emit_plot_data = true;

            auto art = fmn::run(cfg);
            for (const auto& c : art.ledger.claims)
                std::cout << c.info.id << ": " << fmn::verdict_name(c.verdict) << " ("
                          << c.cases << " cases, " << c.failures << " failures)\n";
            std::cout << "overall: " << (art.ledger.all_pass() ? "pass" : "fail")
                      << "; artifacts in " << art.out_dir.string() << "\n";
            return art.exit_code;
        }
        std::cout << app.help();
        return 2;
    } catch (const fmn::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
