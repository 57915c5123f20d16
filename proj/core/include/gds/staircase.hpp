#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gds/core.hpp"
#include "gds/set_distances.hpp"

namespace gds {

// 1 / (2N * 2^N)
double series_weight(std::size_t n);

// sum_{N > L} series_weight(N), via sum_{N >= 1} series_weight(N) = ln(2) / 2.
double tail_bound(std::size_t levels);

// Tail bound for a concrete pair: per-level Hausdorff <= 1 when the common
// family contains translations, otherwise bounded through the largest
// feature magnitude; infinite when the families differ.
double tail_bound_for(const FiniteGDS& x, const FiniteGDS& y, std::size_t levels);

struct StaircaseLevel {
    std::size_t n = 1;
    std::vector<FiniteGDS> members;
    bool exhaustive = true;
};

StaircaseLevel staircase_level(const FiniteGDS& x, std::size_t n, std::size_t budget = 64, std::uint64_t seed = 1);

struct LevelHausdorff {
    double lower = 0.0;
    double upper = 0.0;
    bool estimate = false;  // a level was sampled; upper is not a certified bound
};

LevelHausdorff level_hausdorff(const StaircaseLevel& a, const StaircaseLevel& b, const SearchConfig& config = {});

struct StaircaseConfig {
    SearchConfig search;
    std::size_t budget = 64;
    std::uint64_t seed = 1;
};

struct SeriesBracket {
    double partial = 0.0;
    double tail_bound = 0.0;
    std::size_t levels = 0;
    double lower = 0.0;
    std::array<double, 2> interval{0.0, 0.0};
    std::vector<LevelHausdorff> per_level;
    bool estimate = false;
};

SeriesBracket staircase_distance(const FiniteGDS& x, const FiniteGDS& y, std::size_t levels,
                                 const StaircaseConfig& config = {});

// The pyramid metric on associated pyramids uses the same levels.
SeriesBracket rho_estimate(const FiniteGDS& x, const FiniteGDS& y, std::size_t levels,
                           const StaircaseConfig& config = {});

// M-measurements of the N-measurements of X agree, up to isomorphism, with
// the direct M-measurements (M < N). Exhaustive; meant for small X.
bool measurement_levels_coherent(const FiniteGDS& x, std::size_t m, std::size_t n);

}  // namespace gds
