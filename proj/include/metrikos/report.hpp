#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "metrikos/core.hpp"
#include "metrikos/metrize.hpp"
#include "metrikos/regularity.hpp"

namespace metrikos::report {

using json = nlohmann::ordered_json;

/// Resolved description of one command run: everything the pipelines need,
/// merged from an optional config file and command-line overrides
/// (overrides win). Space documents are inlined at load time so the input
/// digest covers the actual data, not a file name.
struct JobConfig {
    std::string command;    // validate | regularity | metrize | fuzz
    std::string structure;  // b | f | theta
    json space;             // space document; null when absent
    std::optional<double> K;
    std::optional<std::string> f;
    double alpha = 0.0;
    std::optional<std::string> theta;
    std::vector<double> eps;  // scale grid; merged with k, empty -> default
    std::optional<double> k;
    std::optional<std::string> anchor;
    std::optional<std::string> transform;  // identity | power:<e> | custom:<expr>
    std::optional<std::uint64_t> seed;
    std::uint64_t trials = 100;
    std::string family = "euclid2";  // euclid | euclid2 | matrix
    std::uint64_t points = 6;
    bool expect_violations = false;
    std::vector<std::string> checks;  // check-name filter; empty -> run all
    double tol = kDefaultRelTol;
    bool strict = false;  // heuristic failures gate the exit code
};

/// Parse a JSON file. File and syntax problems surface as InputError and
/// ParseError (byte offset preserved).
json load_json_file(const std::string& path);

/// Apply config-document keys onto a JobConfig. Keys mirror the CLI option
/// names; "space" may be an inline document or a file path. Unknown keys
/// and type mismatches are rejected.
void apply_config_json(JobConfig& config, const json& doc);

/// Space document in either accepted shape:
///   {"labels": [...], "matrix": [[...]]}   explicit matrix
///   {"points": [...], "formula": "..."}    sampled, formula over (x, y)
/// Structural validation only; the distance axioms are a reported check so
/// that invalid spaces produce a verdict, not a load failure.
core::DistanceSpace space_from_json(const json& doc);
json space_to_json(const core::DistanceSpace& space);

json witness_to_json(const core::Witness& witness);
json verdict_to_json(const core::Verdict& verdict);
json certificate_to_json(const regularity::RegularityCertificate& cert);

/// Transform selector: "identity", "power:<e>" with e in (0,1], or
/// "custom:<expr>" with expr over t.
metrize::WeightTransform parse_transform(const std::string& text);

struct RunResult {
    json report;
    int exit_code = 0;
};

/// Execute config.command and assemble the versioned report
/// ("metrikos-report/1"). Configuration problems throw (InputError,
/// ParseError, EvalError; exit code 2 at the CLI); mathematical failures
/// and certificate-search exhaustion are reported in-band with exit code 1.
/// Timing lives only under "timing_ms", so reports are byte-identical for
/// identical inputs once that subobject is dropped.
RunResult run_job(const JobConfig& config);

}  // namespace metrikos::report
