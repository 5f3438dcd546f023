#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metrikos/common.hpp"
#include "metrikos/expr.hpp"

namespace metrikos::core {

/// Dense square matrix of doubles, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t side, double fill = 0.0)
        : side_(side), data_(side * side, fill) {}

    std::size_t side() const { return side_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * side_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * side_ + j]; }
    const std::vector<double>& data() const { return data_; }

    std::vector<std::vector<double>> rows() const;
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

private:
    std::size_t side_ = 0;
    std::vector<double> data_;
};

/// Finite labeled point set with a symmetric nonnegative distance matrix;
/// the carrier of D for b-, F- and theta-structures. Construction validates
/// structure only (square, finite entries, distinct labels); the distance
/// axioms themselves are checked by check_distance_axioms so that invalid
/// matrices can still be loaded, checked and reported on.
class DistanceSpace {
public:
    DistanceSpace(std::vector<std::string> labels, Matrix d);

    /// Labels default to p0, p1, ...
    static DistanceSpace from_matrix(const std::vector<std::vector<double>>& rows);
    static DistanceSpace from_matrix(std::vector<std::string> labels,
                                     const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    std::size_t index_of(const std::string& label) const;  // throws InputError on unknown label
    double d(std::size_t i, std::size_t j) const { return d_(i, j); }
    const Matrix& matrix() const { return d_; }

    /// Distinct positive distance values, ascending.
    std::vector<double> positive_distance_values() const;
    double max_distance() const;

    DistanceSpace scaled(double lambda) const;
    DistanceSpace restricted(const std::vector<std::size_t>& keep) const;

private:
    std::vector<std::string> labels_;
    Matrix d_;
};

struct BParams {
    double K = 1.0;  // relaxed-triangle coefficient, K > 0
};

struct FParams {
    expr::ScalarFn f;    // control function over t > 0
    double alpha = 0.0;  // nonnegative shift
};

struct ThetaParams {
    expr::BinaryFn theta;  // B-action candidate over (s,t) >= 0
};

/// Concrete violating tuple, replayable against its source space/function.
/// `points` holds labels, or formatted numeric arguments for function-class
/// witnesses.
struct Witness {
    std::string kind;                 // axiom/condition identifier
    std::vector<std::string> points;  // violating tuple
    double lhs = 0.0;
    double rhs = 0.0;
    std::string relation;  // the inequality that failed, lhs-rhs order
};

/// Pass/fail outcome with either computed certificates or a witness.
struct Verdict {
    bool pass = true;
    std::optional<Witness> witness;
    std::map<std::string, double> certificates;

    static Verdict ok(std::map<std::string, double> certs = {}) {
        return Verdict{true, std::nullopt, std::move(certs)};
    }
    static Verdict fail(Witness w, std::map<std::string, double> certs = {}) {
        return Verdict{false, std::move(w), std::move(certs)};
    }
    bool heuristic() const { return certificates.count("heuristic") > 0; }
};

/// Distance trace of a point sequence: values[n] = D(a_n, .) for n = 1, 2, ...
struct SampledSequence {
    std::string name;
    std::vector<double> values;

    SampledSequence() = default;
    SampledSequence(std::string n, std::vector<double> v);
};

/// Zero diagonal, symmetry and off-diagonal positivity. On failure the
/// witness names the first violating entry pair in row-major order.
Verdict check_distance_axioms(const DistanceSpace& space, Tolerance tol = {});

/// Sample an analytic space: d[i][j] = formula(points[i], points[j]).
/// Structural validation only; the caller may then run check_distance_axioms
/// (space_from_points does both). Labels are the formatted point values.
DistanceSpace sample_space(const std::vector<double>& points, const expr::BinaryFn& formula);

/// sample_space followed by check_distance_axioms; throws InputError with
/// the witness if the axioms fail.
DistanceSpace space_from_points(const std::vector<double>& points, const expr::BinaryFn& formula,
                                Tolerance tol = {});

}  // namespace metrikos::core
