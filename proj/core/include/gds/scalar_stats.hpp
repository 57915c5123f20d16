#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gds/core.hpp"

namespace gds {

// Minimal width of a window [a, b] of support points carrying mass >= alpha.
double partial_diameter(const DiscreteMeasureR& mu, double alpha);

// Smallest support value m with mu((-inf, m]) >= 1/2.
double levy_mean(const DiscreteMeasureR& mu);

// inf{eps >= 0 : w(|f - g| > eps) <= eps}; weights need not be normalised
// (zero entries allowed), which the coupling code relies on.
double ky_fan_weighted(std::span<const double> f, std::span<const double> g, std::span<const double> w);
// Same, from precomputed absolute differences.
double ky_fan_from_diffs(std::span<const double> diffs, std::span<const double> w);

inline double ky_fan(const Row& f, const Row& g, const ProbVector& mu) {
    return ky_fan_weighted(f, g, mu.span());
}

// inf{eps >= 0 : mu(U(A, eps)) >= nu(A) - eps for all Borel A}, U the open
// eps-neighbourhood.
double prohorov(const DiscreteMeasureR& mu, const DiscreteMeasureR& nu);

// Hausdorff distance between index sets {0..na-1} and {0..nb-1} under dist(i, j).
double hausdorff(std::size_t na, std::size_t nb, const std::function<double(std::size_t, std::size_t)>& dist);

// Max flow in a bipartite network source -> left (cap) -> right (cap) -> sink,
// with uncapacitated edges adj[l] listing right indices.
double bipartite_max_flow(const std::vector<double>& left_cap, const std::vector<double>& right_cap,
                          const std::vector<std::vector<std::size_t>>& adj);

}  // namespace gds
