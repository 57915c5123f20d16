#pragma once

#include <vector>

#include "gds/core.hpp"

namespace gds {

// od(X; -kappa) = max over generators f of pd(f_* mu; 1 - kappa).
double observable_diameter(const FiniteGDS& x, double kappa);

// Same quantity for the distance-function embedding of (D, mu) without
// building the data set. Validates that D is a metric (O(n^3)).
double observable_diameter_hss(const Matrix& d, const ProbVector& mu, double kappa, double tol = kDefaultTol);

// od over an increasing kappa grid; throws MonotonicityViolation if the
// result is not nonincreasing.
std::vector<double> od_profile(const FiniteGDS& x, const std::vector<double>& kappas);

// od for kappa in (0, inf) extended by 0 for kappa >= 1 (used by the
// transfer inequalities where kappa + delta may leave the unit interval).
double observable_diameter_ext(const FiniteGDS& x, double kappa);

}  // namespace gds
