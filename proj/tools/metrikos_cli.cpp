// Command-line front end: merges a config file with per-command overrides,
// runs the requested pipeline, and prints one JSON report to stdout.
// Exit codes: 0 pass, 1 mathematical failure (witness in report), 2
// input/configuration error (diagnostic on stderr).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "metrikos/report.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string structure;
    std::string space_path;
    double K = 0.0;
    std::string f;
    double alpha = 0.0;
    std::string theta;
    std::vector<double> eps;
    double k = 0.0;
    std::string anchor;
    std::string transform;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    double tol = 0.0;
    bool strict = false;
    std::string out_path;
    std::string family;
    std::uint64_t points = 0;
    bool expect_violations = false;
    std::vector<std::string> checks;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "Config file (JSON; keys mirror these options)");
    cmd->add_option("--structure", opt.structure, "Structure kind: b | f | theta");
    cmd->add_option("--space", opt.space_path,
                    "Space file: {\"labels\",\"matrix\"} or {\"points\",\"formula\"}");
    cmd->add_option("--K", opt.K, "Relaxed-triangle coefficient (structure b)");
    cmd->add_option("--f", opt.f, "Control function over t (structure f), e.g. \"ln(t)\"");
    cmd->add_option("--alpha", opt.alpha, "Chain-condition shift (structure f, default 0)");
    cmd->add_option("--theta", opt.theta, "B-action over (s,t) (structure theta), e.g. \"s+t\"");
    cmd->add_option("--eps", opt.eps, "Scale(s) for certificates; repeatable");
    cmd->add_option("--k", opt.k, "Single certificate scale (merged with --eps)");
    cmd->add_option("--anchor", opt.anchor, "Anchor label for anchored certificates");
    cmd->add_option("--transform", opt.transform,
                    "Weight transform: identity | power:<e> | custom:<expr>");
    cmd->add_option("--seed", opt.seed, "Fuzzing seed (required for fuzz)");
    cmd->add_option("--trials", opt.trials, "Fuzzing trial count (default 100)");
    cmd->add_option("--tol", opt.tol, "Relative comparison tolerance (default 1e-9)");
    cmd->add_flag("--strict", opt.strict, "Heuristic check failures also gate the exit code");
    cmd->add_option("--out", opt.out_path, "Also write the report to this file");
    cmd->add_option("--family", opt.family, "Fuzz family: euclid | euclid2 | matrix");
    cmd->add_option("--points", opt.points, "Fuzz points per space (default 6)");
    cmd->add_flag("--expect-violations", opt.expect_violations,
                  "Fuzz passes only when violations are found (expected-failure fixture)");
    cmd->add_option("--checks", opt.checks, "Run only these named checks; repeatable");
}

metrikos::report::JobConfig build_config(const std::string& command, const CLI::App* cmd,
                                         const CliOptions& opt) {
    metrikos::report::JobConfig config;
    config.command = command;
    if (cmd->count("--config") > 0) {
        const auto doc = metrikos::report::load_json_file(opt.config_path);
        metrikos::report::apply_config_json(config, doc);
    }
    if (cmd->count("--structure") > 0) config.structure = opt.structure;
    if (cmd->count("--space") > 0) {
        config.space = metrikos::report::load_json_file(opt.space_path);
    }
    if (cmd->count("--K") > 0) config.K = opt.K;
    if (cmd->count("--f") > 0) config.f = opt.f;
    if (cmd->count("--alpha") > 0) config.alpha = opt.alpha;
    if (cmd->count("--theta") > 0) config.theta = opt.theta;
    if (cmd->count("--eps") > 0) config.eps = opt.eps;
    if (cmd->count("--k") > 0) config.k = opt.k;
    if (cmd->count("--anchor") > 0) config.anchor = opt.anchor;
    if (cmd->count("--transform") > 0) config.transform = opt.transform;
    if (cmd->count("--seed") > 0) config.seed = opt.seed;
    if (cmd->count("--trials") > 0) config.trials = opt.trials;
    if (cmd->count("--tol") > 0) config.tol = opt.tol;
    if (opt.strict) config.strict = true;
    if (cmd->count("--family") > 0) config.family = opt.family;
    if (cmd->count("--points") > 0) config.points = opt.points;
    if (opt.expect_violations) config.expect_violations = true;
    if (cmd->count("--checks") > 0) config.checks = opt.checks;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "metrikos: validate b-/F-/theta-metric structures, compute regularity "
        "certificates, and construct equivalent metrics with distortion bounds"};
    app.require_subcommand(1);

    CliOptions validate_opt, regularity_opt, metrize_opt, fuzz_opt;
    CLI::App* validate =
        app.add_subcommand("validate", "Check the structure's axioms on a finite space");
    add_common_options(validate, validate_opt);
    CLI::App* regularity = app.add_subcommand(
        "regularity", "Compute regularity certificates and replay them against the space");
    add_common_options(regularity, regularity_opt);
    CLI::App* metrize = app.add_subcommand(
        "metrize", "Construct an equivalent metric by minimal chain sums over weights");
    add_common_options(metrize, metrize_opt);
    CLI::App* fuzz =
        app.add_subcommand("fuzz", "Search random spaces for structure violations and shrink them");
    add_common_options(fuzz, fuzz_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        metrikos::report::JobConfig config;
        const CLI::App* active = nullptr;
        const CliOptions* opt = nullptr;
        if (validate->parsed()) {
            active = validate;
            opt = &validate_opt;
            config = build_config("validate", validate, validate_opt);
        } else if (regularity->parsed()) {
            active = regularity;
            opt = &regularity_opt;
            config = build_config("regularity", regularity, regularity_opt);
        } else if (metrize->parsed()) {
            active = metrize;
            opt = &metrize_opt;
            config = build_config("metrize", metrize, metrize_opt);
        } else {
            active = fuzz;
            opt = &fuzz_opt;
            config = build_config("fuzz", fuzz, fuzz_opt);
        }

        const auto result = metrikos::report::run_job(config);
        const std::string text = result.report.dump(2) + "\n";
        std::cout << text;
        if (active->count("--out") > 0) {
            std::ofstream out(opt->out_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write report to '" << opt->out_path << "'\n";
                return 2;
            }
            out << text;
        }
        return result.exit_code;
    } catch (const metrikos::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const metrikos::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const metrikos::EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const metrikos::SearchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
