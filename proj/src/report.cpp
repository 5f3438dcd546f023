#include "metrikos/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "metrikos/axioms.hpp"
#include "metrikos/fuzz.hpp"

namespace metrikos::report {

using core::DistanceSpace;
using core::Verdict;
using core::Witness;
using regularity::RegularityCertificate;

// ---------------------------------------------------------------------------
// Input documents

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what(), e.byte);
    }
}

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& want) {
    throw InputError("config key \"" + key + "\" must be " + want);
}

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) bad_key(key, "a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) bad_key(key, "finite");
    return x;
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) bad_key(key, "a string");
    return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) bad_key(key, "a boolean");
    return v.get<bool>();
}

std::uint64_t as_count(const json& v, const std::string& key) {
    // Parsed documents store nonnegative integers as unsigned; values built
    // through an API may arrive as signed integers instead.
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    bad_key(key, "a nonnegative integer");
    return 0;
}

}  // namespace

void apply_config_json(JobConfig& config, const json& doc) {
    if (!doc.is_object()) throw InputError("config document must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "structure") {
            config.structure = as_string(value, key);
        } else if (key == "space") {
            if (value.is_string()) {
                config.space = load_json_file(value.get<std::string>());
            } else if (value.is_object()) {
                config.space = value;
            } else {
                bad_key(key, "an inline space object or a file path");
            }
        } else if (key == "K") {
            config.K = as_number(value, key);
        } else if (key == "f") {
            config.f = as_string(value, key);
        } else if (key == "alpha") {
            config.alpha = as_number(value, key);
        } else if (key == "theta") {
            config.theta = as_string(value, key);
        } else if (key == "eps") {
            config.eps.clear();
            if (value.is_number()) {
                config.eps.push_back(as_number(value, key));
            } else if (value.is_array()) {
                for (const auto& item : value) config.eps.push_back(as_number(item, key));
            } else {
                bad_key(key, "a number or an array of numbers");
            }
        } else if (key == "k") {
            config.k = as_number(value, key);
        } else if (key == "anchor") {
            config.anchor = as_string(value, key);
        } else if (key == "transform") {
            config.transform = as_string(value, key);
        } else if (key == "seed") {
            config.seed = as_count(value, key);
        } else if (key == "trials") {
            config.trials = as_count(value, key);
        } else if (key == "family") {
            config.family = as_string(value, key);
        } else if (key == "points") {
            config.points = as_count(value, key);
        } else if (key == "expect_violations") {
            config.expect_violations = as_bool(value, key);
        } else if (key == "checks") {
            if (!value.is_array()) bad_key(key, "an array of check names");
            config.checks.clear();
            for (const auto& item : value) config.checks.push_back(as_string(item, key));
        } else if (key == "tol") {
            config.tol = as_number(value, key);
        } else if (key == "strict") {
            config.strict = as_bool(value, key);
        } else {
            throw InputError("unknown config key \"" + key + "\"");
        }
    }
}

DistanceSpace space_from_json(const json& doc) {
    if (!doc.is_object()) throw InputError("space document must be a JSON object");
    const bool has_matrix = doc.contains("labels") || doc.contains("matrix");
    const bool has_points = doc.contains("points") || doc.contains("formula");
    if (has_matrix && has_points) {
        throw InputError("space document mixes the matrix and points forms");
    }
    if (has_matrix) {
        if (!doc.contains("labels") || !doc.contains("matrix")) {
            throw InputError("matrix-form space needs both \"labels\" and \"matrix\"");
        }
        for (const auto& [key, value] : doc.items()) {
            (void)value;
            if (key != "labels" && key != "matrix") {
                throw InputError("unknown space key \"" + key + "\"");
            }
        }
        if (!doc["labels"].is_array()) bad_key("labels", "an array of strings");
        std::vector<std::string> labels;
        for (const auto& item : doc["labels"]) labels.push_back(as_string(item, "labels"));
        if (!doc["matrix"].is_array()) bad_key("matrix", "an array of rows");
        std::vector<std::vector<double>> rows;
        for (const auto& row : doc["matrix"]) {
            if (!row.is_array()) bad_key("matrix", "an array of rows");
            std::vector<double> r;
            for (const auto& item : row) r.push_back(as_number(item, "matrix"));
            rows.push_back(std::move(r));
        }
        return DistanceSpace::from_matrix(std::move(labels), rows);
    }
    if (has_points) {
        if (!doc.contains("points") || !doc.contains("formula")) {
            throw InputError("points-form space needs both \"points\" and \"formula\"");
        }
        for (const auto& [key, value] : doc.items()) {
            (void)value;
            if (key != "points" && key != "formula") {
                throw InputError("unknown space key \"" + key + "\"");
            }
        }
        if (!doc["points"].is_array()) bad_key("points", "an array of numbers");
        std::vector<double> points;
        for (const auto& item : doc["points"]) points.push_back(as_number(item, "points"));
        const auto formula = expr::BinaryFn::parse(as_string(doc["formula"], "formula"), "x", "y");
        return core::sample_space(points, formula);
    }
    throw InputError(
        "space document must be {\"labels\", \"matrix\"} or {\"points\", \"formula\"}");
}

json space_to_json(const DistanceSpace& space) {
    json doc;
    doc["labels"] = space.labels();
    doc["matrix"] = space.matrix().rows();
    return doc;
}

// ---------------------------------------------------------------------------
// Serialization

json witness_to_json(const Witness& witness) {
    json doc;
    doc["kind"] = witness.kind;
    doc["points"] = witness.points;
    doc["lhs"] = witness.lhs;
    doc["rhs"] = witness.rhs;
    doc["relation"] = witness.relation;
    return doc;
}

json verdict_to_json(const Verdict& verdict) {
    json doc;
    doc["pass"] = verdict.pass;
    doc["witness"] = verdict.witness ? witness_to_json(*verdict.witness) : json(nullptr);
    doc["certificates"] = json(verdict.certificates);
    return doc;
}

json certificate_to_json(const RegularityCertificate& cert) {
    json doc;
    doc["condition"] = cert.condition;
    doc["anchor"] = cert.anchor ? json(*cert.anchor) : json(nullptr);
    doc["scale"] = cert.scale;
    doc["value"] = cert.value;
    doc["method"] = cert.method;
    doc["margin"] = cert.margin;
    doc["resolution"] = cert.resolution;
    doc["extras"] = json(cert.extras);
    return doc;
}

metrize::WeightTransform parse_transform(const std::string& text) {
    if (text == "identity") return metrize::WeightTransform::identity();
    if (text.rfind("power:", 0) == 0) {
        const std::string num = text.substr(6);
        double e = 0.0;
        const char* first = num.data();
        const char* last = num.data() + num.size();
        auto [ptr, ec] = std::from_chars(first, last, e);
        if (ec != std::errc{} || ptr != last) {
            throw InputError("transform power exponent must be a number, got '" + num + "'");
        }
        return metrize::WeightTransform::power(e);
    }
    if (text.rfind("custom:", 0) == 0) {
        return metrize::WeightTransform::custom(expr::ScalarFn::parse(text.substr(7), "t"));
    }
    throw InputError("unknown transform '" + text + "' (identity | power:<e> | custom:<expr>)");
}

// ---------------------------------------------------------------------------
// Report assembly

namespace {

const std::set<std::string>& known_check_names() {
    static const std::set<std::string> names{
        "distance-axioms",  "b-triangle",    "f-chain-condition", "f1-monotone",
        "f2-limit",         "b-action-axioms", "theta-triangle",  "b-action-solvability",
        "iii-C-replay",     "iii-A",         "uniform-phi-grid",  "uniform-phi-replay",
        "phi-from-f",       "r-from-f",      "delta-theta",       "cross-check",
        "metric-axioms",    "f-sandwich",    "fuzz",
    };
    return names;
}

json config_options(const JobConfig& c) {
    json o;
    o["structure"] = c.structure;
    o["K"] = c.K ? json(*c.K) : json(nullptr);
    o["f"] = c.f ? json(*c.f) : json(nullptr);
    o["alpha"] = c.alpha;
    o["theta"] = c.theta ? json(*c.theta) : json(nullptr);
    o["eps"] = json(c.eps);
    o["k"] = c.k ? json(*c.k) : json(nullptr);
    o["anchor"] = c.anchor ? json(*c.anchor) : json(nullptr);
    o["transform"] = c.transform ? json(*c.transform) : json(nullptr);
    o["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    o["trials"] = c.trials;
    o["family"] = c.family;
    o["points"] = c.points;
    o["expect_violations"] = c.expect_violations;
    o["checks"] = json(c.checks);
    o["tol"] = c.tol;
    o["strict"] = c.strict;
    return o;
}

std::string input_digest(const JobConfig& c) {
    json fingerprint;
    fingerprint["command"] = c.command;
    fingerprint["options"] = config_options(c);
    fingerprint["space"] = c.space.is_null() ? json(nullptr) : c.space;
    return fnv1a64_hex(fingerprint.dump());
}

/// Accumulates check entries, certificates and timings in execution order
/// and derives the overall verdict and exit code. Heuristic checks live in
/// their own section and gate the exit code only in strict mode.
class ReportBuilder {
public:
    explicit ReportBuilder(const JobConfig& config) : config_(config) {
        for (const auto& name : config.checks) {
            if (known_check_names().count(name) == 0) {
                std::string all;
                for (const auto& known : known_check_names()) {
                    if (!all.empty()) all += ", ";
                    all += known;
                }
                throw InputError("unknown check name \"" + name + "\" (known: " + all + ")");
            }
        }
    }

    /// Whether the checks filter admits this base name. Gating checks are
    /// run unconditionally by the pipelines and skip this query.
    bool selected(const std::string& base) const {
        if (config_.checks.empty()) return true;
        return std::find(config_.checks.begin(), config_.checks.end(), base) !=
               config_.checks.end();
    }

    /// Run one named check under a timer. A SearchError is recorded as a
    /// failed entry carrying the search trace; other exceptions propagate
    /// (configuration problems, exit code 2 at the CLI).
    bool run_check(const std::string& name, bool heuristic,
                   const std::function<Verdict()>& fn) {
        json entry;
        entry["name"] = name;
        bool pass = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            Verdict verdict = fn();
            pass = verdict.pass;
            entry["pass"] = verdict.pass;
            entry["witness"] =
                verdict.witness ? witness_to_json(*verdict.witness) : json(nullptr);
            entry["certificates"] = json(verdict.certificates);
            entry["error"] = nullptr;
        } catch (const SearchError& e) {
            pass = false;
            entry["pass"] = false;
            entry["witness"] = nullptr;
            entry["certificates"] = json::object();
            entry["error"] = e.what();
        }
        const auto stop = std::chrono::steady_clock::now();
        timing_[name] = std::chrono::duration<double, std::milli>(stop - start).count();
        if (heuristic) {
            entry["heuristic"] = true;
            heuristic_checks_.push_back(std::move(entry));
            heuristic_pass_ = heuristic_pass_ && pass;
        } else {
            checks_.push_back(std::move(entry));
            core_pass_ = core_pass_ && pass;
        }
        return pass;
    }

    void add_certificate(const RegularityCertificate& cert) {
        certificates_.push_back(certificate_to_json(cert));
    }

    void set_results(json results) { results_ = std::move(results); }

    bool core_pass() const { return core_pass_; }

    RunResult finish() const {
        json report;
        report["schema"] = "metrikos-report/1";
        report["tool_version"] = kToolVersion;
        report["command"] = config_.command;
        report["structure"] = config_.structure;
        report["input_digest"] = input_digest(config_);
        report["options"] = config_options(config_);
        report["checks"] = checks_;
        report["heuristic_checks"] = heuristic_checks_;
        report["certificates"] = certificates_;
        if (!results_.is_null()) report["results"] = results_;
        report["overall_pass"] = core_pass_;
        const int exit_code = core_pass_ ? ((config_.strict && !heuristic_pass_) ? 1 : 0) : 1;
        report["exit_code"] = exit_code;
        report["timing_ms"] = timing_;
        return RunResult{std::move(report), exit_code};
    }

private:
    const JobConfig& config_;
    json checks_ = json::array();
    json heuristic_checks_ = json::array();
    json certificates_ = json::array();
    json results_;
    json timing_ = json::object();
    bool core_pass_ = true;
    bool heuristic_pass_ = true;
};

// ---------------------------------------------------------------------------
// Shared pipeline pieces

Tolerance tolerance_of(const JobConfig& config) {
    if (!(config.tol > 0.0) || !(config.tol < 1.0)) {
        throw InputError("tolerance must lie in (0, 1)");
    }
    return Tolerance{config.tol};
}

void require_structure(const JobConfig& config) {
    if (config.structure != "b" && config.structure != "f" && config.structure != "theta") {
        throw InputError("structure must be one of b, f, theta (--structure)");
    }
}

DistanceSpace require_space(const JobConfig& config) {
    if (config.space.is_null()) {
        throw InputError(config.command + " requires a space (--space or config \"space\")");
    }
    return space_from_json(config.space);
}

core::FParams require_f(const JobConfig& config) {
    if (!config.f) throw InputError("structure f requires a control function (--f)");
    if (!(config.alpha >= 0.0) || !std::isfinite(config.alpha)) {
        throw InputError("alpha must be finite and nonnegative");
    }
    return core::FParams{expr::ScalarFn::parse(*config.f, "t"), config.alpha};
}

core::ThetaParams require_theta(const JobConfig& config) {
    if (!config.theta) throw InputError("structure theta requires a B-action (--theta)");
    return core::ThetaParams{expr::BinaryFn::parse(*config.theta, "s", "t")};
}

/// Scale grid for certificates: --eps values plus --k, deduplicated
/// ascending; {0.5, 1, 2, 4} when neither is given.
std::vector<double> scale_grid(const JobConfig& config) {
    std::vector<double> scales = config.eps;
    if (config.k) scales.push_back(*config.k);
    if (scales.empty()) scales = {0.5, 1.0, 2.0, 4.0};
    for (double s : scales) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw InputError("scales (--eps, --k) must be positive and finite");
        }
    }
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    return scales;
}

std::vector<std::string> anchors_of(const JobConfig& config, const DistanceSpace& space) {
    if (config.anchor) {
        space.index_of(*config.anchor);  // label must exist
        return {*config.anchor};
    }
    return space.labels();
}

std::string bracketed(const std::string& base,
                      std::initializer_list<std::pair<const char*, std::string>> args) {
    std::string name = base + "[";
    bool first = true;
    for (const auto& [key, value] : args) {
        if (!first) name += ",";
        first = false;
        name += key;
        name += "=";
        name += value;
    }
    name += "]";
    return name;
}

/// Anchored (iii-A) replay: d(a,b) < phi and d(b,c) < phi imply d(a,c) < eps.
Verdict replay_local_phi(const DistanceSpace& space, const std::string& anchor, double phi,
                         double eps, Tolerance tol) {
    const std::size_t a = space.index_of(anchor);
    const std::size_t n = space.size();
    double min_margin = std::numeric_limits<double>::infinity();
    std::size_t fired = 0;
    for (std::size_t b = 0; b < n; ++b) {
        if (!tol.lt_strict(space.d(a, b), phi)) continue;
        for (std::size_t c = 0; c < n; ++c) {
            if (!tol.lt_strict(space.d(b, c), phi)) continue;
            ++fired;
            if (!tol.lt_strict(space.d(a, c), eps)) {
                return Verdict::fail(Witness{"iii-A",
                                             {space.label(b), space.label(c)},
                                             space.d(a, c),
                                             eps,
                                             "d(a,c) >= eps although d(a,b), d(b,c) < phi"});
            }
            min_margin = std::min(min_margin, eps - space.d(a, c));
        }
    }
    std::map<std::string, double> certs;
    if (fired > 0) {
        certs["min_margin"] = min_margin;
        certs["pairs"] = static_cast<double>(fired);
    } else {
        certs["vacuous"] = 1.0;
    }
    return Verdict::ok(std::move(certs));
}

// ---------------------------------------------------------------------------
// Command pipelines

/// Structure validators shared by validate, regularity and metrize. The
/// non-heuristic ones gate certificate and construction work; the heuristic
/// ones (F2, B-action solvability) report separately. Returns the gate
/// verdict and surfaces the structure parameters it resolved.
struct StructureGate {
    bool ok = true;
    double K_used = 1.0;
    double K_min = 1.0;
    std::optional<core::FParams> f;
    std::optional<core::ThetaParams> theta;
};

StructureGate run_structure_checks(ReportBuilder& builder, const JobConfig& config,
                                   const DistanceSpace& space, Tolerance tol) {
    StructureGate gate;
    gate.ok = builder.run_check("distance-axioms", false, [&] {
        return core::check_distance_axioms(space, tol);
    });
    if (config.structure == "b") {
        const auto analysis = axioms::min_b_analysis(space);
        gate.K_min = analysis.K_min;
        gate.K_used = config.K.value_or(analysis.K_min);
        const double K_used = gate.K_used;
        gate.ok = builder.run_check("b-triangle", false,
                                    [&, K_used] {
                                        Verdict v = axioms::check_b(space, {K_used}, tol);
                                        v.certificates["K_used"] = K_used;
                                        return v;
                                    }) &&
                  gate.ok;
    } else if (config.structure == "f") {
        gate.f = require_f(config);
        gate.ok = builder.run_check("f-chain-condition", false,
                                    [&] { return axioms::check_f_metric(space, *gate.f, tol); }) &&
                  gate.ok;
        gate.ok = builder.run_check("f1-monotone", false,
                                    [&] {
                                        return axioms::check_f1_monotone(
                                            gate.f->f, axioms::default_f1_grid(), tol);
                                    }) &&
                  gate.ok;
        builder.run_check("f2-limit", true,
                          [&] { return axioms::check_f2_limit(gate.f->f, {}, 3, tol); });
    } else {
        gate.theta = require_theta(config);
        const auto grid = axioms::default_action_grid();
        gate.ok = builder.run_check("b-action-axioms", false,
                                    [&] {
                                        return axioms::check_b_action_axioms(*gate.theta, grid,
                                                                             tol);
                                    }) &&
                  gate.ok;
        gate.ok = builder.run_check("theta-triangle", false,
                                    [&] {
                                        return axioms::check_theta_metric(space, *gate.theta,
                                                                          tol);
                                    }) &&
                  gate.ok;
        builder.run_check("b-action-solvability", true, [&] {
            return axioms::check_b_action_solvability(*gate.theta, grid, tol);
        });
    }
    return gate;
}

RunResult run_validate(const JobConfig& config) {
    require_structure(config);
    const DistanceSpace space = require_space(config);
    const Tolerance tol = tolerance_of(config);
    ReportBuilder builder(config);
    run_structure_checks(builder, config, space, tol);
    return builder.finish();
}

RunResult run_regularity(const JobConfig& config) {
    require_structure(config);
    const DistanceSpace space = require_space(config);
    const Tolerance tol = tolerance_of(config);
    const auto scales = scale_grid(config);
    ReportBuilder builder(config);
    const auto anchors = anchors_of(config, space);
    const StructureGate gate = run_structure_checks(builder, config, space, tol);

    json results;
    results["scales"] = json(scales);
    results["anchors"] = json(anchors);
    builder.set_results(std::move(results));
    if (!gate.ok) return builder.finish();

    auto replay_iiiC = [&](double scale, double r) {
        for (const auto& anchor : anchors) {
            builder.run_check(
                bracketed("iii-C-replay",
                          {{"anchor", anchor}, {"scale", format_number(scale)}}),
                false, [&] { return regularity::verify_iiiC(space, anchor, scale, r, tol); });
        }
    };

    for (const double scale : scales) {
        if (config.structure == "b") {
            if (builder.selected("iii-C-replay")) {
                const auto cert = regularity::r_for_b({gate.K_used}, scale);
                builder.add_certificate(cert);
                replay_iiiC(scale, cert.value);
            }
        } else if (config.structure == "f") {
            if (builder.selected("phi-from-f")) {
                std::optional<RegularityCertificate> cert;
                builder.run_check(
                    bracketed("phi-from-f", {{"eps", format_number(scale)}}), false, [&] {
                        cert = regularity::phi_from_f(*gate.f, scale, {}, tol);
                        return Verdict::ok({{"phi", cert->value},
                                            {"delta", cert->extras.at("delta")},
                                            {"margin", cert->margin}});
                    });
                if (cert) {
                    builder.add_certificate(*cert);
                    builder.run_check(
                        bracketed("uniform-phi-replay", {{"eps", format_number(scale)}}),
                        false, [&] {
                            return regularity::replay_uniform_phi(space, cert->value, scale,
                                                                  tol);
                        });
                }
            }
            if (builder.selected("r-from-f")) {
                std::optional<RegularityCertificate> cert;
                builder.run_check(
                    bracketed("r-from-f", {{"k", format_number(scale)}}), false, [&] {
                        cert = regularity::r_from_f(*gate.f, scale, {}, tol);
                        return Verdict::ok({{"r", cert->value}, {"margin", cert->margin}});
                    });
                if (cert) {
                    builder.add_certificate(*cert);
                    replay_iiiC(scale, cert->value);
                }
            }
        } else {
            if (builder.selected("delta-theta")) {
                std::optional<RegularityCertificate> cert;
                builder.run_check(
                    bracketed("delta-theta", {{"k", format_number(scale)}}), false, [&] {
                        cert = regularity::delta_theta_at_origin(*gate.theta, scale, {}, tol);
                        return Verdict::ok({{"value", cert->value},
                                            {"delta", cert->extras.at("delta")},
                                            {"margin", cert->margin}});
                    });
                if (cert) {
                    builder.add_certificate(*cert);
                    replay_iiiC(scale, cert->value);
                }
            }
        }

        // Space-intrinsic certificates, independent of the structure branch:
        // Chittenden's uniform modulus from the candidate scan, and the
        // anchored (iii-A) modulus when a specific anchor was requested.
        if (builder.selected("uniform-phi-grid")) {
            std::optional<RegularityCertificate> cert;
            builder.run_check(
                bracketed("uniform-phi-grid", {{"eps", format_number(scale)}}), false, [&] {
                    cert = regularity::uniform_phi(space, scale, tol);
                    if (!cert) {
                        return Verdict::fail(Witness{"uniform",
                                                     {},
                                                     0.0,
                                                     scale,
                                                     "no candidate phi certifies at this eps"});
                    }
                    return Verdict::ok({{"phi", cert->value}});
                });
            if (cert) {
                builder.add_certificate(*cert);
                builder.run_check(
                    bracketed("uniform-phi-replay",
                              {{"eps", format_number(scale)}, {"method", "grid"}}),
                    false, [&] {
                        return regularity::replay_uniform_phi(space, cert->value, scale, tol);
                    });
            }
        }
        if (config.anchor && builder.selected("iii-A")) {
            const std::string anchor = *config.anchor;
            std::optional<RegularityCertificate> cert;
            builder.run_check(
                bracketed("iii-A",
                          {{"anchor", anchor}, {"eps", format_number(scale)}}),
                false, [&] {
                    cert = regularity::locally_regular_phi(space, anchor, scale, tol);
                    if (!cert) {
                        return Verdict::fail(Witness{"iii-A",
                                                     {anchor},
                                                     0.0,
                                                     scale,
                                                     "no candidate phi certifies at this eps"});
                    }
                    return Verdict::ok({{"phi", cert->value}});
                });
            if (cert) {
                builder.add_certificate(*cert);
                builder.run_check(
                    bracketed("iii-A-replay",
                              {{"anchor", anchor}, {"eps", format_number(scale)}}),
                    false, [&] {
                        return replay_local_phi(space, anchor, cert->value, scale, tol);
                    });
            }
        }
    }

    if (builder.selected("cross-check")) {
        builder.run_check("cross-check", false, [&] {
            return regularity::cross_check_conditions(space, scales, tol);
        });
    }
    return builder.finish();
}

RunResult run_metrize(const JobConfig& config) {
    require_structure(config);
    const DistanceSpace space = require_space(config);
    const Tolerance tol = tolerance_of(config);
    ReportBuilder builder(config);
    const StructureGate gate = run_structure_checks(builder, config, space, tol);
    if (!gate.ok) return builder.finish();

    metrize::WeightTransform transform = metrize::WeightTransform::identity();
    if (config.transform) {
        transform = parse_transform(*config.transform);
    } else if (config.structure == "b") {
        transform = metrize::WeightTransform::power(metrize::snowflake_exponent(gate.K_min));
    }

    const auto result = metrize::chain_metric(space, transform, tol);
    builder.run_check("metric-axioms", false,
                      [&] { return metrize::exact_metric_check(result.metric); });

    json results;
    results["transform"] = result.transform.description;
    results["metric"] = json::object();
    results["metric"]["labels"] = space.labels();
    results["metric"]["matrix"] = result.metric.rows();
    results["max_distortion"] = result.max_distortion;
    results["argmax_pair"] =
        json::array({space.label(result.argmax_i), space.label(result.argmax_j)});
    json bounds = json::array();
    for (const auto& bound : result.per_pair_bounds) {
        json item;
        item["pair"] = json::array({space.label(bound.i), space.label(bound.j)});
        item["lower"] = bound.lower;
        item["upper"] = bound.upper;
        bounds.push_back(std::move(item));
    }
    results["pair_bounds"] = std::move(bounds);

    if (config.structure == "b") {
        std::optional<core::BParams> bparams = core::BParams{gate.K_min};
        const auto distortion = metrize::distortion_report(result, space, bparams);
        results["snowflake_epsilon"] = metrize::snowflake_exponent(gate.K_min);
        results["snowflake_within_4"] = distortion.snowflake_within_4
                                            ? json(*distortion.snowflake_within_4)
                                            : json(nullptr);
    }

    if (config.structure == "f" && builder.selected("f-sandwich")) {
        // The sandwich d <= D <= f^{-1}(f(d) + alpha) is stated for the
        // identity-weight chain metric; recompute it when a different
        // transform produced the main result.
        const core::Matrix d_identity =
            transform.kind == metrize::WeightTransform::Kind::Identity
                ? result.metric
                : metrize::chain_metric(space, metrize::WeightTransform::identity(), tol)
                      .metric;
        json sandwich = json::array();
        builder.run_check("f-sandwich", false, [&] {
            const std::size_t n = space.size();
            double max_ratio = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double lower = d_identity(i, j);
                    const double direct = space.d(i, j);
                    const double upper = metrize::f_upper_bound_auto(*gate.f, lower, tol);
                    json item;
                    item["pair"] = json::array({space.label(i), space.label(j)});
                    item["lower"] = lower;
                    item["direct"] = direct;
                    item["upper"] = upper;
                    sandwich.push_back(std::move(item));
                    if (!tol.leq(lower, direct)) {
                        return Verdict::fail(Witness{"sandwich",
                                                     {space.label(i), space.label(j)},
                                                     lower,
                                                     direct,
                                                     "d(x,y) > D(x,y)"});
                    }
                    if (!tol.leq(direct, upper)) {
                        return Verdict::fail(
                            Witness{"sandwich",
                                    {space.label(i), space.label(j)},
                                    direct,
                                    upper,
                                    "D(x,y) > f_upper_bound(d(x,y))"});
                    }
                    if (lower > 0.0) max_ratio = std::max(max_ratio, upper / lower);
                }
            }
            return Verdict::ok({{"max_ratio", max_ratio}});
        });
        results["sandwich"] = std::move(sandwich);
    }

    builder.set_results(std::move(results));
    return builder.finish();
}

RunResult run_fuzz_command(const JobConfig& config) {
    require_structure(config);
    if (!config.seed) throw InputError("fuzz requires a deterministic seed (--seed)");
    if (config.trials < 1) throw InputError("fuzz requires at least one trial (--trials)");
    const Tolerance tol = tolerance_of(config);

    fuzz::FuzzSpec spec;
    spec.family = fuzz::family_from_name(config.family);
    spec.n_points = static_cast<std::size_t>(config.points);
    spec.seed = *config.seed;

    fuzz::Checker checker;
    std::string check_name;
    if (config.structure == "b") {
        if (!config.K) throw InputError("fuzz with structure b requires --K");
        const core::BParams params{*config.K};
        checker = [params, tol](const DistanceSpace& s) {
            return axioms::check_b(s, params, tol);
        };
        check_name = "b-triangle";
    } else if (config.structure == "f") {
        const core::FParams params = require_f(config);
        checker = [params, tol](const DistanceSpace& s) {
            return axioms::check_f_metric(s, params, tol);
        };
        check_name = "f-chain-condition";
    } else {
        const core::ThetaParams params = require_theta(config);
        checker = [params, tol](const DistanceSpace& s) {
            return axioms::check_theta_metric(s, params, tol);
        };
        check_name = "theta-triangle";
    }

    ReportBuilder builder(config);
    json violations = json::array();
    builder.run_check("fuzz", false, [&] {
        const auto outcome = fuzz::run_fuzz(spec, config.trials, checker);
        for (const auto& violation : outcome.violations) {
            json item;
            item["trial"] = violation.trial;
            item["space"] = space_to_json(violation.space);
            item["witness"] = witness_to_json(violation.witness);
            violations.push_back(std::move(item));
        }
        const std::map<std::string, double> certs{
            {"violations", static_cast<double>(outcome.violations.size())},
            {"trials", static_cast<double>(outcome.trials)}};
        if (config.expect_violations) {
            if (!outcome.violations.empty()) return Verdict::ok(certs);
            return Verdict::fail(
                Witness{"fuzz-expectation", {}, 0.0, 1.0, "expected violations, found none"},
                certs);
        }
        if (outcome.violations.empty()) return Verdict::ok(certs);
        return Verdict::fail(outcome.violations.front().witness, certs);
    });

    json results;
    results["family"] = config.family;
    results["points"] = config.points;
    results["trials"] = config.trials;
    results["seed"] = *config.seed;
    results["check"] = check_name;
    results["violations"] = std::move(violations);
    builder.set_results(std::move(results));
    return builder.finish();
}

}  // namespace

RunResult run_job(const JobConfig& config) {
    if (config.command == "validate") return run_validate(config);
    if (config.command == "regularity") return run_regularity(config);
    if (config.command == "metrize") return run_metrize(config);
    if (config.command == "fuzz") return run_fuzz_command(config);
    throw InputError("unknown command '" + config.command +
                     "' (validate | regularity | metrize | fuzz)");
}

}  // namespace metrikos::report
