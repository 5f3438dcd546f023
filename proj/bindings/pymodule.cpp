// Python bindings for the main operations: space construction, axiom
// validation, regularity certificates, metrization, and the full report
// pipeline. Verdicts, certificates, and reports cross the boundary as plain
// dicts mirroring the CLI's JSON shapes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metrikos/axioms.hpp"
#include "metrikos/core.hpp"
#include "metrikos/fuzz.hpp"
#include "metrikos/metrize.hpp"
#include "metrikos/regularity.hpp"
#include "metrikos/report.hpp"

namespace py = pybind11;

using metrikos::Tolerance;
using metrikos::core::DistanceSpace;
using metrikos::report::json;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
        case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) {
                out[py::str(key)] = json_to_py(value);
            }
            return out;
        }
        default: return py::none();
    }
}

json py_to_json(py::handle obj) {
    if (obj.is_none()) return json(nullptr);
    if (py::isinstance<py::bool_>(obj)) return json(obj.cast<bool>());
    if (py::isinstance<py::int_>(obj)) {
        const auto value = obj.cast<std::int64_t>();
        if (value >= 0) return json(static_cast<std::uint64_t>(value));
        return json(value);
    }
    if (py::isinstance<py::float_>(obj)) return json(obj.cast<double>());
    if (py::isinstance<py::str>(obj)) return json(obj.cast<std::string>());
    if (py::isinstance<py::dict>(obj)) {
        json out = json::object();
        for (const auto item : obj.cast<py::dict>()) {
            out[item.first.cast<std::string>()] = py_to_json(item.second);
        }
        return out;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        json out = json::array();
        for (const auto item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
        return out;
    }
    throw py::type_error("unsupported value in config (expected JSON-like types)");
}

py::object verdict_dict(const metrikos::core::Verdict& verdict) {
    return json_to_py(metrikos::report::verdict_to_json(verdict));
}

py::object certificate_dict(const metrikos::regularity::RegularityCertificate& cert) {
    return json_to_py(metrikos::report::certificate_to_json(cert));
}

metrikos::core::FParams make_f(const std::string& f, double alpha) {
    return metrikos::core::FParams{metrikos::expr::ScalarFn::parse(f, "t"), alpha};
}

metrikos::core::ThetaParams make_theta(const std::string& theta) {
    return metrikos::core::ThetaParams{metrikos::expr::BinaryFn::parse(theta, "s", "t")};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Verification and metrization workbench for b-metric, F-metric and "
        "theta-metric spaces";
    m.attr("__version__") = metrikos::kToolVersion;

    py::register_exception<metrikos::InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<metrikos::ParseError>(m, "FormulaParseError", PyExc_ValueError);
    py::register_exception<metrikos::EvalError>(m, "EvalError", PyExc_ValueError);
    py::register_exception<metrikos::SearchError>(m, "SearchError", PyExc_RuntimeError);

    py::class_<DistanceSpace>(m, "DistanceSpace",
                              "Finite labeled point set with a distance matrix")
        .def_property_readonly("labels",
                               [](const DistanceSpace& s) { return s.labels(); })
        .def_property_readonly("matrix",
                               [](const DistanceSpace& s) { return s.matrix().rows(); })
        .def("__len__", &DistanceSpace::size)
        .def(
            "d",
            [](const DistanceSpace& s, std::size_t i, std::size_t j) {
                if (i >= s.size() || j >= s.size()) {
                    throw py::index_error("point index out of range");
                }
                return s.d(i, j);
            },
            py::arg("i"), py::arg("j"), "Distance by point index")
        .def(
            "distance",
            [](const DistanceSpace& s, const std::string& x, const std::string& y) {
                return s.d(s.index_of(x), s.index_of(y));
            },
            py::arg("x"), py::arg("y"), "Distance by point label")
        .def("__repr__", [](const DistanceSpace& s) {
            return "<DistanceSpace with " + std::to_string(s.size()) + " points>";
        });

    m.def(
        "space_from_matrix",
        [](const std::vector<std::vector<double>>& matrix,
           std::optional<std::vector<std::string>> labels) {
            if (labels) return DistanceSpace::from_matrix(*labels, matrix);
            return DistanceSpace::from_matrix(matrix);
        },
        py::arg("matrix"), py::arg("labels") = std::nullopt,
        "Build a space from a square distance matrix (labels default to p0, p1, ...)");

    m.def(
        "space_from_points",
        [](const std::vector<double>& points, const std::string& formula) {
            return metrikos::core::space_from_points(
                points, metrikos::expr::BinaryFn::parse(formula, "x", "y"));
        },
        py::arg("points"), py::arg("formula"),
        "Sample d(x,y) = formula over real points and check the distance axioms");

    m.def(
        "check_distance_axioms",
        [](const DistanceSpace& space, double tol) {
            return verdict_dict(metrikos::core::check_distance_axioms(space, Tolerance{tol}));
        },
        py::arg("space"), py::arg("tol") = metrikos::kDefaultRelTol,
        "Zero diagonal, symmetry, off-diagonal positivity");

    m.def(
        "min_b_constant",
        [](const DistanceSpace& space) { return metrikos::axioms::min_b_constant(space); },
        py::arg("space"), "Smallest K satisfying the relaxed triangle inequality");

    m.def(
        "check_b",
        [](const DistanceSpace& space, double K, double tol) {
            return verdict_dict(metrikos::axioms::check_b(space, {K}, Tolerance{tol}));
        },
        py::arg("space"), py::arg("K"), py::arg("tol") = metrikos::kDefaultRelTol,
        "Relaxed triangle inequality d(x,z) <= K*(d(x,y)+d(y,z))");

    m.def(
        "check_f_metric",
        [](const DistanceSpace& space, const std::string& f, double alpha, double tol) {
            return verdict_dict(
                metrikos::axioms::check_f_metric(space, make_f(f, alpha), Tolerance{tol}));
        },
        py::arg("space"), py::arg("f"), py::arg("alpha") = 0.0,
        py::arg("tol") = metrikos::kDefaultRelTol,
        "Chain condition f(d(x,y)) <= f(sum of chain edges) + alpha");

    m.def(
        "check_f1_monotone",
        [](const std::string& f, double tol) {
            return verdict_dict(metrikos::axioms::check_f1_monotone(
                metrikos::expr::ScalarFn::parse(f, "t"), metrikos::axioms::default_f1_grid(),
                Tolerance{tol}));
        },
        py::arg("f"), py::arg("tol") = metrikos::kDefaultRelTol,
        "f non-decreasing on the default positive grid");

    m.def(
        "check_f2_limit",
        [](const std::string& f, int drops, double tol) {
            return verdict_dict(metrikos::axioms::check_f2_limit(
                metrikos::expr::ScalarFn::parse(f, "t"), {}, drops, Tolerance{tol}));
        },
        py::arg("f"), py::arg("drops") = 3, py::arg("tol") = metrikos::kDefaultRelTol,
        "Heuristic: f(t) -> -inf along a geometric decay of t");

    m.def(
        "check_b_action",
        [](const std::string& theta, double tol) {
            return verdict_dict(metrikos::axioms::check_b_action(
                make_theta(theta), metrikos::axioms::default_action_grid(), Tolerance{tol}));
        },
        py::arg("theta"), py::arg("tol") = metrikos::kDefaultRelTol,
        "B-action axioms on the default grid (solvability part is heuristic)");

    m.def(
        "check_theta_metric",
        [](const DistanceSpace& space, const std::string& theta, double tol) {
            return verdict_dict(
                metrikos::axioms::check_theta_metric(space, make_theta(theta), Tolerance{tol}));
        },
        py::arg("space"), py::arg("theta"), py::arg("tol") = metrikos::kDefaultRelTol,
        "Generalized triangle inequality d(x,z) <= theta(d(x,y), d(y,z))");

    m.def(
        "min_chain_sums",
        [](const DistanceSpace& space) {
            return metrikos::axioms::all_pairs_min_chain(space).matrix().rows();
        },
        py::arg("space"), "All-pairs minimal chain sums");

    m.def(
        "r_for_b", [](double K, double t) { return certificate_dict(metrikos::regularity::r_for_b({K}, t)); },
        py::arg("K"), py::arg("t"), "Certificate r = t/K for condition (iii-C)");

    m.def(
        "phi_from_f",
        [](const std::string& f, double alpha, double eps) {
            return certificate_dict(metrikos::regularity::phi_from_f(make_f(f, alpha), eps));
        },
        py::arg("f"), py::arg("alpha"), py::arg("eps"),
        "Uniform modulus phi(eps) = delta/2 from the control pair (f, alpha)");

    m.def(
        "r_from_f",
        [](const std::string& f, double alpha, double k) {
            return certificate_dict(metrikos::regularity::r_from_f(make_f(f, alpha), k));
        },
        py::arg("f"), py::arg("alpha"), py::arg("k"),
        "Certificate r for (iii-C) from the control pair (f, alpha)");

    m.def(
        "delta_theta_at_origin",
        [](const std::string& theta, double k) {
            return certificate_dict(
                metrikos::regularity::delta_theta_at_origin(make_theta(theta), k));
        },
        py::arg("theta"), py::arg("k"),
        "Certificate delta/sqrt(2) from continuity of theta at the origin");

    m.def(
        "locally_regular_phi",
        [](const DistanceSpace& space, const std::string& anchor, double eps,
           double tol) -> py::object {
            const auto cert = metrikos::regularity::locally_regular_phi(space, anchor, eps,
                                                                        Tolerance{tol});
            if (!cert) return py::none();
            return certificate_dict(*cert);
        },
        py::arg("space"), py::arg("anchor"), py::arg("eps"),
        py::arg("tol") = metrikos::kDefaultRelTol,
        "Anchored modulus for condition (iii-A), or None");

    m.def(
        "uniform_phi",
        [](const DistanceSpace& space, double eps, double tol) -> py::object {
            const auto cert = metrikos::regularity::uniform_phi(space, eps, Tolerance{tol});
            if (!cert) return py::none();
            return certificate_dict(*cert);
        },
        py::arg("space"), py::arg("eps"), py::arg("tol") = metrikos::kDefaultRelTol,
        "Uniform modulus over all anchors, or None");

    m.def(
        "verify_iiiC",
        [](const DistanceSpace& space, const std::string& anchor, double k, double r,
           double tol) {
            return verdict_dict(
                metrikos::regularity::verify_iiiC(space, anchor, k, r, Tolerance{tol}));
        },
        py::arg("space"), py::arg("anchor"), py::arg("k"), py::arg("r"),
        py::arg("tol") = metrikos::kDefaultRelTol,
        "Replay condition (iii-C): d(a,b) >= k implies d(a,c)+d(b,c) >= r");

    m.def(
        "check_iiiB",
        [](const std::vector<double>& d_an_a, const std::vector<double>& d_an_bn,
           const std::vector<double>& d_bn_a, double tol, std::optional<double> tol_prime) {
            return verdict_dict(metrikos::regularity::check_iiiB(
                {"d(a_n,a)", d_an_a}, {"d(a_n,b_n)", d_an_bn}, {"d(b_n,a)", d_bn_a}, tol,
                tol_prime));
        },
        py::arg("d_an_a"), py::arg("d_an_bn"), py::arg("d_bn_a"), py::arg("tol"),
        py::arg("tol_prime") = std::nullopt,
        "Condition (iii-B) on three distance traces");

    m.def(
        "snowflake_exponent",
        [](double K) { return metrikos::metrize::snowflake_exponent(K); }, py::arg("K"),
        "ln 2 / ln(2*max(K,1))");

    m.def(
        "chain_metric",
        [](const DistanceSpace& space, const std::string& transform, double tol) {
            const auto result = metrikos::metrize::chain_metric(
                space, metrikos::report::parse_transform(transform), Tolerance{tol});
            py::dict out;
            out["metric"] = result.metric.rows();
            out["transform"] = result.transform.description;
            out["max_distortion"] = result.max_distortion;
            out["argmax_pair"] =
                py::make_tuple(space.label(result.argmax_i), space.label(result.argmax_j));
            return out;
        },
        py::arg("space"), py::arg("transform") = "identity",
        py::arg("tol") = metrikos::kDefaultRelTol,
        "Equivalent metric from minimal chain sums over transformed weights");

    m.def(
        "exact_metric_check",
        [](const std::vector<std::vector<double>>& matrix, double tol) {
            return verdict_dict(metrikos::metrize::exact_metric_check(
                metrikos::core::Matrix::from_rows(matrix), Tolerance{tol}));
        },
        py::arg("matrix"), py::arg("tol") = 1e-9,
        "Full metric axioms, including the exact triangle inequality");

    m.def(
        "f_upper_bound",
        [](const std::string& f, double alpha, double sp_value) {
            return metrikos::metrize::f_upper_bound_auto(make_f(f, alpha), sp_value);
        },
        py::arg("f"), py::arg("alpha"), py::arg("sp_value"),
        "Least u with f(u) >= f(sp_value) + alpha (certified upper end)");

    m.def(
        "run_job",
        [](const std::string& command, py::dict config) {
            metrikos::report::JobConfig job;
            job.command = command;
            metrikos::report::apply_config_json(job, py_to_json(config));
            const auto result = metrikos::report::run_job(job);
            return py::make_tuple(json_to_py(result.report), result.exit_code);
        },
        py::arg("command"), py::arg("config"),
        "Run a full pipeline (validate | regularity | metrize | fuzz); returns "
        "(report, exit_code)");
}
