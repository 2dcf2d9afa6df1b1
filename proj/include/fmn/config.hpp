#pragma once

// Run configuration: a single structured-text file declaring spaces, corpus,
// exponent triples, radius grid, claim selection, seed, and optional constant
// overrides. run() builds everything, executes the suite, and writes the
// artifacts. Identical (config, seed) pairs produce byte-identical outputs.

#include "fmn/io.hpp"

namespace fmn {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::vector<std::string> space_specs;   // generator spec or file path
    std::vector<std::string> corpus_specs = {"zero", "ball-indicator(4)", "power(0.5)",
                                             "random-step(4)", "random-values(3)",
                                             "complex-values(2)"};
    std::vector<NormParams> params = {NormParams(1, 2, 4),   NormParams(2, 2, 2),
                                      NormParams(1, 1, kInf), NormParams(2, 4, kInf),
                                      NormParams(1, 2, kInf), NormParams(2, 3, 6)};
    int rgrid_points = 16;
    std::string suite_glob = "*";
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    ConstantOverrides overrides;
    int witness_stages = 3;
    bool emit_plot_data = false;
    // Young-claim kernel: "averaging(r,beta)" with "auto" allowed for either
    // slot, or "matrix:<path>" naming an explicit kernel file
    std::string kernel_spec = "averaging(auto,auto)";
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (std::getline(iss, tok, sep)) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

inline NormParams parse_params_triple(const std::string& spec) {
    auto open = spec.find('(');
    auto close = spec.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close <= open)
        throw ConfigError("malformed exponent triple: " + spec);
    auto parts = split(spec.substr(open + 1, close - open - 1), ',');
    if (parts.size() != 3) throw ConfigError("exponent triple needs (q,alpha,p): " + spec);
    try {
        return NormParams(parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2]));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad exponent triple ") + spec + ": " + e.what());
    }
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    bool saw_corpus = false, saw_params = false;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value': " + line);
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (key == "space") {
            cfg.space_specs.push_back(val);
        } else if (key == "corpus") {
            if (!saw_corpus) cfg.corpus_specs.clear();
            saw_corpus = true;
            for (auto& spec : detail::split(val, ';')) cfg.corpus_specs.push_back(spec);
        } else if (key == "params") {
            if (!saw_params) cfg.params.clear();
            saw_params = true;
            for (auto& spec : detail::split(val, ';'))
                cfg.params.push_back(detail::parse_params_triple(spec));
        } else if (key == "rgrid") {
            cfg.rgrid_points = static_cast<int>(parse_real(val));
            if (cfg.rgrid_points < 1) throw ConfigError("rgrid must be >= 1");
        } else if (key == "suite") {
            cfg.suite_glob = val;
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_real(val));
        } else if (key == "out") {
            cfg.out_dir = val;
        } else if (key == "witness-stages") {
            cfg.witness_stages = static_cast<int>(parse_real(val));
        } else if (key == "override") {
            auto colon = val.find(':');
            if (colon == std::string::npos)
                throw ConfigError("override needs name:factor, got " + val);
            cfg.overrides.factor[detail::trim(val.substr(0, colon))] =
                parse_real(detail::trim(val.substr(colon + 1)));
        } else if (key == "kernel") {
            cfg.kernel_spec = val;
        } else if (key == "emit-plot-data") {
            cfg.emit_plot_data = val == "1" || val == "true" || val == "yes";
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    if (cfg.space_specs.empty())
        cfg.space_specs = {"grid1d(256,1)", "sqline(64)", "grid2d(16,1)", "tree(3,2)"};
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

struct RunArtifacts {
    Ledger ledger;
    std::filesystem::path out_dir;
    int exit_code = 0;  // 0 pass, 1 assertion failure
};

inline PointSpace build_space(const std::string& spec) {
    if (spec.find('(') != std::string::npos) return generate_space(spec);
    std::ifstream in(spec);
    if (!in) throw ConfigError("cannot open space file: " + spec);
    return load_space(in);
}

inline RunArtifacts run(const RunConfig& cfg) {
    // owners must outlive the jobs that point into them
    std::vector<std::unique_ptr<PointSpace>> spaces;
    std::vector<std::unique_ptr<DyadicSystem>> systems;
    std::vector<std::unique_ptr<GeometryConstants>> geos;
    std::vector<VerifyJob> jobs;

    for (const auto& spec : cfg.space_specs) {
        spaces.push_back(std::make_unique<PointSpace>(build_space(spec)));
        const PointSpace& s = *spaces.back();
        SamplePolicy pol;
        pol.interior_only = true;
        pol.seed = cfg.seed;
        geos.push_back(
            std::make_unique<GeometryConstants>(fit_geometry(s, default_window(s), pol)));
        auto win = default_window(s);
        std::vector<double> grid = log_grid(win.r_min, win.r_max, cfg.rgrid_points);
        int m = generation_index(grid.front(), DyadicSystem::default_rho(s.kappa()), s.kappa());
        systems.push_back(std::make_unique<DyadicSystem>(s, m));

        VerifyJob j;
        j.space = &s;
        j.dyadic = systems.back().get();
        j.geo = geos.back().get();
        j.r_grid = grid;
        for (const auto& cspec : cfg.corpus_specs) {
            if (cspec.rfind("file:", 0) == 0) {
                std::ifstream in(cspec.substr(5));
                if (!in) throw ConfigError("cannot open function file: " + cspec.substr(5));
                j.corpus.push_back(load_function(in, s));
                continue;
            }
            for (auto& f : generate_corpus(cspec, cfg.seed, s)) j.corpus.push_back(std::move(f));
        }
        jobs.push_back(std::move(j));
    }

    SuiteOptions opt;
    opt.params = cfg.params;
    opt.claim_glob = cfg.suite_glob;
    opt.seed = cfg.seed;
    opt.overrides = cfg.overrides;
    opt.witness_stages = cfg.witness_stages;
    if (cfg.kernel_spec.rfind("matrix:", 0) == 0) {
        std::ifstream in(cfg.kernel_spec.substr(7));
        if (!in) throw ConfigError("cannot open kernel file: " + cfg.kernel_spec.substr(7));
        opt.kernel_matrix = load_kernel_entries(in);
    } else if (cfg.kernel_spec.rfind("averaging(", 0) == 0) {
        auto close = cfg.kernel_spec.rfind(')');
        if (close == std::string::npos) throw ConfigError("malformed kernel spec");
        auto parts = detail::split(
            cfg.kernel_spec.substr(10, close - 10), ',');
        if (parts.size() != 2) throw ConfigError("kernel spec needs averaging(r,beta)");
        if (parts[0] != "auto") opt.kernel_r = parse_real(parts[0]);
        if (parts[1] != "auto") opt.kernel_beta = parse_real(parts[1]);
    } else {
        throw ConfigError("unknown kernel spec: " + cfg.kernel_spec);
    }

    RunArtifacts art;
    art.ledger = run_suite(jobs, opt);
    art.out_dir = cfg.out_dir;
    std::filesystem::create_directories(art.out_dir);
    {
        std::ofstream out(art.out_dir / "ledger.txt");
        write_ledger_text(art.ledger, out);
    }
    {
        std::ofstream out(art.out_dir / "ledger.csv");
        write_ledger_csv(art.ledger, out);
    }
    {
        std::ofstream out(art.out_dir / "norms.csv");
        write_norms_csv(jobs, out);
    }
    if (cfg.emit_plot_data) {
        std::ofstream out(art.out_dir / "plot.csv");
        write_plot_csv(jobs, cfg.params, out);
    }
    art.exit_code = art.ledger.all_pass() ? 0 : 1;
    return art;
}

inline std::vector<ClaimInfo> list_claims() {
    // run the registry against an empty job set: bodies see no jobs, the
    // claim list is the registration order
    std::vector<VerifyJob> none;
    SuiteOptions opt;
    opt.run_witness = false;
    Ledger led = run_suite(none, opt);
    std::vector<ClaimInfo> out;
    for (const auto& c : led.claims) out.push_back(c.info);
    return out;
}

}  // namespace fmn
