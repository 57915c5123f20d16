#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gds {

using Row = std::vector<double>;
using Matrix = std::vector<Row>;

inline constexpr double kDefaultTol = 1e-9;
// Guard used when comparing accumulated mass sums against thresholds.
inline constexpr double kMassGuard = 1e-12;

// Strictly positive weights summing to one.
class ProbVector {
public:
    ProbVector() = default;
    // Throws ZeroWeight for non-positive entries, InvalidRange if the sum is off.
    explicit ProbVector(std::vector<double> weights);

    static ProbVector uniform(std::size_t n);

    std::size_t size() const noexcept { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    const std::vector<double>& values() const noexcept { return w_; }
    std::span<const double> span() const noexcept { return w_; }

    bool operator==(const ProbVector&) const = default;

private:
    std::vector<double> w_;
};

// Closed family L of 1-Lipschitz maps acting on feature values.
struct FamilyTag {
    enum class Kind { Identity, T, B, TB, Lip1Sampled };

    Kind kind = Kind::TB;
    std::size_t sample_budget = 0;  // only for Lip1Sampled

    static FamilyTag identity() { return {Kind::Identity, 0}; }
    static FamilyTag translations() { return {Kind::T, 0}; }
    static FamilyTag bounds() { return {Kind::B, 0}; }
    static FamilyTag tb() { return {Kind::TB, 0}; }
    static FamilyTag lip1(std::size_t budget) { return {Kind::Lip1Sampled, budget}; }

    // Accepts id|identity, T, B, TB, lip1:<budget>; throws SchemaError otherwise.
    static FamilyTag parse(const std::string& text);
    std::string to_string() const;

    bool has_translations() const { return kind == Kind::T || kind == Kind::TB || kind == Kind::Lip1Sampled; }
    // Inclusion of the represented map families (IDENTITY < B, T < TB < LIP1).
    bool subset_of(const FamilyTag& other) const;

    bool operator==(const FamilyTag&) const = default;
};

// Finite geometric data set: points, generator feature rows (rows = features,
// columns = points), family acting on the generators, and a probability measure.
class FiniteGDS {
public:
    FiniteGDS() = default;

    const std::vector<std::string>& point_ids() const noexcept { return ids_; }
    const Matrix& generators() const noexcept { return gens_; }
    const Row& generator(std::size_t i) const { return gens_[i]; }
    const FamilyTag& family() const noexcept { return family_; }
    const ProbVector& mu() const noexcept { return mu_; }

    std::size_t num_points() const noexcept { return ids_.size(); }
    std::size_t num_generators() const noexcept { return gens_.size(); }

    FiniteGDS with_family(FamilyTag family) const;

    bool operator==(const FiniteGDS&) const = default;

private:
    friend FiniteGDS validate_gds(std::vector<std::string>, Matrix, FamilyTag, std::vector<double>);
    std::vector<std::string> ids_;
    Matrix gens_;
    FamilyTag family_;
    ProbVector mu_;
};

struct Atom {
    double value;
    double mass;
    bool operator==(const Atom&) const = default;
};

// Finitely supported probability measure on the real line; atoms strictly increasing.
struct DiscreteMeasureR {
    std::vector<Atom> atoms;

    // Sorts, merges equal values and validates masses.
    static DiscreteMeasureR from_atoms(std::vector<Atom> atoms);
    double total_mass() const;
    bool operator==(const DiscreteMeasureR&) const = default;
};

FiniteGDS validate_gds(std::vector<std::string> point_ids, Matrix generators, FamilyTag family,
                       std::vector<double> weights);

// Convenience: ids "0".."n-1".
FiniteGDS make_gds(Matrix generators, FamilyTag family, std::vector<double> weights);
FiniteGDS make_gds(Matrix generators, FamilyTag family);  // uniform weights

// d(i,j) = max over generators of |f(i) - f(j)|.
Matrix induced_metric(const FiniteGDS& x);

struct MetricViolation {
    std::size_t i, j, k;
};

// Returns the first violated triple (or symmetry/diagonal defect encoded with
// k == i) in canonical order, if any.
std::optional<MetricViolation> find_metric_violation(const Matrix& d, double tol = kDefaultTol);

// Throws NotAMetric naming the violating triple.
void check_metric(const Matrix& d, double tol = kDefaultTol);

// X_o: generators are the distance functions d(., y), one per point.
FiniteGDS embed_mm_space(const Matrix& d, const ProbVector& mu, FamilyTag family, double tol = kDefaultTol);

DiscreteMeasureR pushforward(std::span<const double> values, std::span<const double> weights);
inline DiscreteMeasureR pushforward(const Row& values, const ProbVector& mu) {
    return pushforward(std::span<const double>(values), mu.span());
}

}  // namespace gds
