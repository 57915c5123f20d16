#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gds/core.hpp"

namespace gds {

struct QuotientResult {
    FiniteGDS space;
    std::vector<std::size_t> map;  // point of X -> class index
};

// Identifies points on which every row of G agrees exactly; masses add up and
// the result's generators are G pushed to the classes. Classes are numbered
// by first occurrence; a class keeps the id of its first point.
QuotientResult quotient(const FiniteGDS& x, const Matrix& g);

struct MeasurementSpec {
    std::vector<std::size_t> features;
    double R = std::numeric_limits<double>::infinity();
};

void validate_spec(const FiniteGDS& x, const MeasurementSpec& spec);

// Quotient of X by {b_R o f_i : i in spec.features}.
FiniteGDS measurement(const FiniteGDS& x, const MeasurementSpec& spec);

struct MeasurementSet {
    std::vector<FiniteGDS> members;
    std::vector<MeasurementSpec> specs;
    bool exhaustive = true;
};

// Measurements over generator subsets of size min(N, #generators); all of them
// when their count <= budget, else `budget` distinct subsets sampled with `seed`.
MeasurementSet enumerate_measurements(const FiniteGDS& x, std::size_t n, double r, std::size_t budget,
                                      std::uint64_t seed);

struct DominationVerdict {
    enum class Status { Dominates, NotDominated, Unknown };
    Status status = Status::Unknown;
    std::vector<std::size_t> witness_map;  // X point -> Y point
    std::string certificate;
    std::size_t maps_examined = 0;
    bool exhaustive = false;
    bool certified = true;  // false when membership rests on sampled lip1 maps or probes
};

const char* status_name(DominationVerdict::Status s);

// Searches measure-preserving point maps phi: X -> Y with F_Y o phi inside the
// closure of the X-family orbits (orbit distance <= tol).
DominationVerdict check_domination(const FiniteGDS& x, const FiniteGDS& y, double tol = kDefaultTol,
                                   std::size_t budget = 100000);

// Exact isomorphism of small data sets: a point bijection preserving masses
// that maps the set of generator rows onto the other's.
bool is_isomorphic(const FiniteGDS& a, const FiniteGDS& b, std::size_t max_points = 8);

}  // namespace gds
