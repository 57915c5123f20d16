#include "gds/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "gds/errors.hpp"

namespace gds {

ProbVector::ProbVector(std::vector<double> weights) : w_(std::move(weights)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (!(w_[i] > 0.0) || !std::isfinite(w_[i]))
            throw Error(ErrorCode::ZeroWeight, "weight " + std::to_string(i) + " is not positive");
        sum += w_[i];
    }
    if (w_.empty()) throw Error(ErrorCode::ZeroWeight, "empty weight vector");
    if (std::abs(sum - 1.0) > kMassGuard) {
        std::ostringstream os;
        os.precision(17);
        os << "weights sum to " << sum;
        throw Error(ErrorCode::InvalidRange, os.str());
    }
}

ProbVector ProbVector::uniform(std::size_t n) {
    return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FamilyTag FamilyTag::parse(const std::string& text) {
    if (text == "id" || text == "identity" || text == "IDENTITY") return identity();
    if (text == "T") return translations();
    if (text == "B") return bounds();
    if (text == "TB") return tb();
    const std::string prefix = "lip1:";
    if (text.rfind(prefix, 0) == 0 || text.rfind("LIP1:", 0) == 0) {
        std::string rest = text.substr(prefix.size());
        if (!rest.empty() && std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            auto budget = std::stoull(rest);
            if (budget > 0) return lip1(budget);
        }
    }
    throw Error(ErrorCode::SchemaError, "unknown family '" + text + "'");
}

std::string FamilyTag::to_string() const {
    switch (kind) {
        case Kind::Identity: return "id";
        case Kind::T: return "T";
        case Kind::B: return "B";
        case Kind::TB: return "TB";
        case Kind::Lip1Sampled: return "lip1:" + std::to_string(sample_budget);
    }
    return "?";
}

bool FamilyTag::subset_of(const FamilyTag& other) const {
    auto rank = [](Kind k) {
        switch (k) {
            case Kind::Identity: return 0;
            case Kind::T:
            case Kind::B: return 1;
            case Kind::TB: return 2;
            case Kind::Lip1Sampled: return 3;
        }
        return 0;
    };
    if (kind == other.kind) return true;
    if (kind == Kind::Identity) return true;
    int a = rank(kind), b = rank(other.kind);
    if (a == 1 && b == 1) return false;  // T and B are incomparable
    return a < b;
}

FiniteGDS FiniteGDS::with_family(FamilyTag family) const {
    FiniteGDS out = *this;
    out.family_ = family;
    return out;
}

DiscreteMeasureR DiscreteMeasureR::from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw Error(ErrorCode::EmptySet, "measure without atoms");
    std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
    DiscreteMeasureR out;
    double sum = 0.0;
    for (const Atom& a : atoms) {
        if (!(a.mass > 0.0) || !std::isfinite(a.value))
            throw Error(ErrorCode::ZeroWeight, "atom with non-positive mass or non-finite value");
        sum += a.mass;
        if (!out.atoms.empty() && out.atoms.back().value == a.value)
            out.atoms.back().mass += a.mass;
        else
            out.atoms.push_back(a);
    }
    if (std::abs(sum - 1.0) > kMassGuard) throw Error(ErrorCode::InvalidRange, "atom masses do not sum to 1");
    return out;
}

double DiscreteMeasureR::total_mass() const {
    double s = 0.0;
    for (const Atom& a : atoms) s += a.mass;
    return s;
}

FiniteGDS validate_gds(std::vector<std::string> point_ids, Matrix generators, FamilyTag family,
                       std::vector<double> weights) {
    const std::size_t n = point_ids.size();
    if (n == 0) throw Error(ErrorCode::DimensionMismatch, "no points");
    if (weights.size() != n)
        throw Error(ErrorCode::DimensionMismatch,
                    "weights has " + std::to_string(weights.size()) + " entries for " + std::to_string(n) + " points");
    for (std::size_t r = 0; r < generators.size(); ++r) {
        if (generators[r].size() != n)
            throw Error(ErrorCode::DimensionMismatch, "generator row " + std::to_string(r) + " has length " +
                                                          std::to_string(generators[r].size()) + ", expected " +
                                                          std::to_string(n));
        for (double v : generators[r])
            if (!std::isfinite(v))
                throw Error(ErrorCode::DimensionMismatch, "generator row " + std::to_string(r) + " has a non-finite value");
    }
    {
        std::set<std::string> seen;
        for (const auto& id : point_ids)
            if (!seen.insert(id).second) throw Error(ErrorCode::IndistinctPoints, "duplicate point id '" + id + "'");
    }
    ProbVector mu(std::move(weights));

    // Points must be separated by the generators: compare columns.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto column_less = [&](std::size_t a, std::size_t b) {
        for (const Row& row : generators) {
            if (row[a] < row[b]) return true;
            if (row[b] < row[a]) return false;
        }
        return false;
    };
    std::sort(order.begin(), order.end(), column_less);
    for (std::size_t k = 1; k < n; ++k) {
        if (!column_less(order[k - 1], order[k]))
            throw Error(ErrorCode::IndistinctPoints, "points '" + point_ids[order[k - 1]] + "' and '" +
                                                         point_ids[order[k]] + "' have identical features");
    }

    FiniteGDS x;
    x.ids_ = std::move(point_ids);
    x.gens_ = std::move(generators);
    x.family_ = family;
    x.mu_ = std::move(mu);
    return x;
}

FiniteGDS make_gds(Matrix generators, FamilyTag family, std::vector<double> weights) {
    std::vector<std::string> ids(weights.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = std::to_string(i);
    return validate_gds(std::move(ids), std::move(generators), family, std::move(weights));
}

FiniteGDS make_gds(Matrix generators, FamilyTag family) {
    std::size_t n = generators.empty() ? 0 : generators.front().size();
    std::vector<double> w(n, n ? 1.0 / static_cast<double>(n) : 0.0);
    return make_gds(std::move(generators), family, std::move(w));
}

Matrix induced_metric(const FiniteGDS& x) {
    const std::size_t n = x.num_points();
    Matrix d(n, Row(n, 0.0));
    for (const Row& f : x.generators())
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double v = std::abs(f[i] - f[j]);
                if (v > d[i][j]) d[i][j] = d[j][i] = v;
            }
    return d;
}

std::optional<MetricViolation> find_metric_violation(const Matrix& d, double tol) {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i].size() != n) throw Error(ErrorCode::DimensionMismatch, "distance matrix is not square");
        if (std::abs(d[i][i]) > tol) return MetricViolation{i, i, i};
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(d[i][j]) || d[i][j] < -tol) return MetricViolation{i, j, i};
            if (std::abs(d[i][j] - d[j][i]) > tol) return MetricViolation{i, j, i};
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Row& di = d[i];
        for (std::size_t j = 0; j < n; ++j) {
            const Row& dj = d[j];
            const double dij = di[j];
            for (std::size_t k = 0; k < n; ++k)
                if (di[k] > dij + dj[k] + tol) return MetricViolation{i, j, k};
        }
    }
    return std::nullopt;
}

void check_metric(const Matrix& d, double tol) {
    auto v = find_metric_violation(d, tol);
    if (!v) return;
    std::ostringstream os;
    os.precision(17);
    if (v->k == v->i)
        os << "entry (" << v->i << "," << v->j << ") breaks zero diagonal, non-negativity or symmetry";
    else
        os << "triangle inequality fails for triple (" << v->i << "," << v->j << "," << v->k << "): d(" << v->i << ","
           << v->k << ")=" << d[v->i][v->k] << " > d(" << v->i << "," << v->j << ")+d(" << v->j << "," << v->k
           << ")=" << d[v->i][v->j] + d[v->j][v->k];
    throw Error(ErrorCode::NotAMetric, os.str());
}

FiniteGDS embed_mm_space(const Matrix& d, const ProbVector& mu, FamilyTag family, double tol) {
    const std::size_t n = d.size();
    if (n != mu.size())
        throw Error(ErrorCode::DimensionMismatch, "distance matrix size does not match weight count");
    for (const Row& r : d)
        if (r.size() != n) throw Error(ErrorCode::DimensionMismatch, "distance matrix is not square");
    check_metric(d, tol);
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
    return validate_gds(std::move(ids), d, family, mu.values());
}

DiscreteMeasureR pushforward(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size())
        throw Error(ErrorCode::DimensionMismatch, "values and weights differ in length");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    DiscreteMeasureR out;
    out.atoms.reserve(values.size());
    for (std::size_t idx : order) {
        if (!out.atoms.empty() && out.atoms.back().value == values[idx])
            out.atoms.back().mass += weights[idx];
        else
            out.atoms.push_back({values[idx], weights[idx]});
    }
    return out;
}

}  // namespace gds
