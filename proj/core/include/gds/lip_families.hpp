#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "gds/core.hpp"

namespace gds {

// p(x) = max(l, min(x + c, u)), with l in [-inf, inf), u in (-inf, inf], l <= u.
struct ClipMap {
    double c = 0.0;
    double l = -std::numeric_limits<double>::infinity();
    double u = std::numeric_limits<double>::infinity();

    static ClipMap make(double c, double l, double u);  // InvalidRange unless l <= u
    static ClipMap identity() { return {}; }
    static ClipMap translation(double c) { return {c, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()}; }
    static ClipMap bound(double r) { return {0.0, -r, r}; }  // b_R
    static ClipMap constant(double v) { return {0.0, v, v}; }

    double operator()(double x) const { return std::max(l, std::min(x + c, u)); }

    // (*this) after inner, as a single clip map.
    ClipMap after(const ClipMap& inner) const;

    bool in_family(const FamilyTag& family) const;

    bool operator==(const ClipMap&) const = default;
};

Row clip_apply(const ClipMap& p, std::span<const double> f);

// Piecewise-linear map through (knots[i], values[i]), constant outside the
// knot range; 1-Lipschitz when consecutive slopes lie in [-1, 1].
struct Lip1Map {
    std::vector<double> knots;
    std::vector<double> values;
    double operator()(double x) const;
    bool is_one_lipschitz(double tol = 1e-12) const;
};

struct OrbitDistanceResult {
    double value = 0.0;
    ClipMap witness;                      // best map in the clip parametrisation
    std::optional<Lip1Map> lip1_witness;  // set when a sampled lip1 map wins
    bool certified = false;
};

// inf over p in the family of d_KF(f, p o g) with respect to the weights.
OrbitDistanceResult dist_to_orbit_weighted(std::span<const double> f, std::span<const double> g,
                                           std::span<const double> w, const FamilyTag& family,
                                           std::uint64_t seed = 0x5eedULL);

inline OrbitDistanceResult dist_to_orbit(const Row& f, const Row& g, const FamilyTag& family, const ProbVector& mu,
                                         double /*tol*/ = kDefaultTol, std::uint64_t seed = 0x5eedULL) {
    return dist_to_orbit_weighted(f, g, mu.span(), family, seed);
}

// inf over p in the family of max_i |f_i - p(g_i)|. Exact for every family
// (lip1 via the McShane extension test).
OrbitDistanceResult sup_dist_to_orbit(std::span<const double> f, std::span<const double> g, const FamilyTag& family);

// Data set (X, mu)/(p o F_X): p applied to the generators, then quotient.
FiniteGDS compose_family(const FiniteGDS& x, const ClipMap& p);

struct CoveringResult {
    std::size_t value = 0;
    bool exact = false;                // exhaustive subset search was used
    bool distances_certified = false;  // all orbit distances exact
    std::vector<std::size_t> centers;
};

// Minimal number of generators N such that every generator f has
// dist_to_orbit(f, n) < eps for some n in N.
CoveringResult covering_number(const FiniteGDS& x, double eps);

struct CapacityResult {
    std::size_t value = 0;
    bool exact = false;
    std::vector<std::size_t> members;
};

// Largest eps-discrete set of generators under the symmetrised orbit distance
// max(dist_to_orbit(f, g), dist_to_orbit(g, f)) > eps.
CapacityResult capacity(const FiniteGDS& x, double eps);

struct ExtractionResult {
    ClipMap g;
    double achieved_pd = 0.0;      // pd(g_* mu; 1 - kappa)
    double guarantee_lhs = 0.0;    // min{r, pd(mu; 1 - (kappa + eps))}
    bool certified = true;
};

// g = b_r o (id - Lm(mu)); guarantee_lhs <= achieved_pd + 2 eps.
ExtractionResult extract_bounded(const DiscreteMeasureR& mu, double kappa, double eps, double r);

// Non-certified search over centred clip maps for kappa anywhere in (0, 1).
ExtractionResult extract_bounded_heuristic(const DiscreteMeasureR& mu, double kappa, double r);

}  // namespace gds
