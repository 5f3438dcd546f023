#include "metrikos/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace metrikos::core {

std::vector<std::vector<double>> Matrix::rows() const {
    std::vector<std::vector<double>> out(side_);
    for (std::size_t i = 0; i < side_; ++i) {
        out[i].assign(data_.begin() + static_cast<std::ptrdiff_t>(i * side_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * side_));
    }
    return out;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) {
            throw InputError("matrix is not square: row " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " entries, expected " +
                             std::to_string(rows.size()));
        }
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

DistanceSpace::DistanceSpace(std::vector<std::string> labels, Matrix d)
    : labels_(std::move(labels)), d_(std::move(d)) {
    if (labels_.empty()) throw InputError("space must have at least one point");
    if (labels_.size() != d_.side()) {
        throw InputError("label count " + std::to_string(labels_.size()) +
                         " does not match matrix side " + std::to_string(d_.side()));
    }
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (l.empty()) throw InputError("empty point label");
        if (!seen.insert(l).second) throw InputError("duplicate point label '" + l + "'");
    }
    for (std::size_t i = 0; i < d_.side(); ++i) {
        for (std::size_t j = 0; j < d_.side(); ++j) {
            if (!std::isfinite(d_(i, j))) {
                throw InputError("non-finite distance at (" + labels_[i] + ", " + labels_[j] +
                                 ")");
            }
        }
    }
}

DistanceSpace DistanceSpace::from_matrix(const std::vector<std::vector<double>>& rows) {
    std::vector<std::string> labels;
    labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) labels.push_back("p" + std::to_string(i));
    return DistanceSpace(std::move(labels), Matrix::from_rows(rows));
}

DistanceSpace DistanceSpace::from_matrix(std::vector<std::string> labels,
                                         const std::vector<std::vector<double>>& rows) {
    return DistanceSpace(std::move(labels), Matrix::from_rows(rows));
}

std::size_t DistanceSpace::index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw InputError("unknown point label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<double> DistanceSpace::positive_distance_values() const {
    std::set<double> vals;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) {
            if (d_(i, j) > 0.0) vals.insert(d_(i, j));
        }
    }
    return {vals.begin(), vals.end()};
}

double DistanceSpace::max_distance() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) m = std::max(m, d_(i, j));
    }
    return m;
}

DistanceSpace DistanceSpace::scaled(double lambda) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InputError("scale factor must be positive and finite");
    }
    Matrix m(size());
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) m(i, j) = lambda * d_(i, j);
    }
    return DistanceSpace(labels_, std::move(m));
}

DistanceSpace DistanceSpace::restricted(const std::vector<std::size_t>& keep) const {
    std::vector<std::string> labels;
    labels.reserve(keep.size());
    Matrix m(keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a) {
        if (keep[a] >= size()) throw InputError("restriction index out of range");
        labels.push_back(labels_[keep[a]]);
        for (std::size_t b = 0; b < keep.size(); ++b) m(a, b) = d_(keep[a], keep[b]);
    }
    return DistanceSpace(std::move(labels), std::move(m));
}

SampledSequence::SampledSequence(std::string n, std::vector<double> v)
    : name(std::move(n)), values(std::move(v)) {
    if (values.empty()) throw InputError("sequence '" + name + "' must be non-empty");
    for (double x : values) {
        if (!std::isfinite(x) || x < 0.0) {
            throw InputError("sequence '" + name + "' needs finite nonnegative values");
        }
    }
}

Verdict check_distance_axioms(const DistanceSpace& space, Tolerance tol) {
    const std::size_t n = space.size();
    // Pass 1: diagonal must vanish. Pass 2: symmetry. Pass 3: positivity off
    // the diagonal. Scanning each axiom over the whole matrix before moving
    // on keeps the reported witness the row-major first violation of the
    // first broken axiom.

    for (std::size_t i = 0; i < n; ++i) {
        if (!tol.eq(space.d(i, i), 0.0)) {
            return Verdict::fail(Witness{"identity",
                                         {space.label(i), space.label(i)},
                                         space.d(i, i),
                                         0.0,
                                         "d(x,x) != 0"});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!tol.eq(space.d(i, j), space.d(j, i))) {
                return Verdict::fail(Witness{"symmetry",
                                             {space.label(i), space.label(j)},
                                             space.d(i, j),
                                             space.d(j, i),
                                             "d(x,y) != d(y,x)"});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            // Strict positivity: a distinct pair at distance ~0 fails.
            if (!tol.lt_strict(0.0, space.d(i, j))) {
                return Verdict::fail(Witness{"positivity",
                                             {space.label(i), space.label(j)},
                                             space.d(i, j),
                                             0.0,
                                             "d(x,y) <= 0 for x != y"});
            }
        }
    }
    return Verdict::ok();
}

DistanceSpace sample_space(const std::vector<double>& points, const expr::BinaryFn& formula) {
    if (points.empty()) throw InputError("point list must be non-empty");
    std::vector<std::string> labels;
    labels.reserve(points.size());
    for (double p : points) {
        if (!std::isfinite(p)) throw InputError("non-finite sample point");
        labels.push_back(format_number(p));
    }
    {
        std::set<std::string> seen(labels.begin(), labels.end());
        if (seen.size() != labels.size()) throw InputError("duplicate sample point");
    }
    Matrix m(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            m(i, j) = formula(points[i], points[j]);
        }
    }
    return DistanceSpace(std::move(labels), std::move(m));
}

DistanceSpace space_from_points(const std::vector<double>& points, const expr::BinaryFn& formula,
                                Tolerance tol) {
    DistanceSpace space = sample_space(points, formula);
    Verdict v = check_distance_axioms(space, tol);
    if (!v.pass) {
        const Witness& w = *v.witness;
        throw InputError("sampled matrix violates " + w.kind + " at (" + w.points[0] + ", " +
                         w.points[1] + "): " + w.relation + " with lhs=" + format_number(w.lhs) +
                         " rhs=" + format_number(w.rhs));
    }
    return space;
}

}  // namespace metrikos::core
