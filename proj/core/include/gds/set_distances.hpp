#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gds/core.hpp"

namespace gds {

class CouplingMatrix {
public:
    CouplingMatrix() = default;
    // Throws MarginalMismatch unless row sums = mu_x and column sums = mu_y within tol.
    CouplingMatrix(Matrix pi, const ProbVector& mu_x, const ProbVector& mu_y, double tol = kDefaultTol);

    static CouplingMatrix product(const ProbVector& mu_x, const ProbVector& mu_y);

    std::size_t rows() const { return pi_.size(); }
    std::size_t cols() const { return pi_.empty() ? 0 : pi_.front().size(); }
    double operator()(std::size_t i, std::size_t j) const { return pi_[i][j]; }
    const Matrix& matrix() const { return pi_; }
    CouplingMatrix transposed() const;

private:
    Matrix pi_;
};

using IndexPair = std::pair<std::size_t, std::size_t>;

struct Bracket {
    double lower = 0.0;
    double upper = 1.0;
    std::string lower_witness;
    std::string upper_witness;
    std::optional<CouplingMatrix> coupling;  // coupling achieving the upper bound
    std::vector<IndexPair> support;          // support S for box brackets
};

struct SearchConfig {
    std::size_t coupling_candidates = 6;   // seeded random transportation-polytope vertices
    std::size_t local_search_steps = 60;   // objective evaluations per candidate in local search
    std::vector<double> kappa_grid;        // empty: 0.01, 0.02, ..., 0.99
    std::uint64_t seed = 1;
    double tol = kDefaultTol;
};

std::vector<double> default_kappa_grid();

// d_conc for a fixed coupling: Hausdorff distance between the feature
// families pulled back to X x Y under the Ky Fan metric of pi.
double dconc_pi(const FiniteGDS& x, const FiniteGDS& y, const CouplingMatrix& pi);

// Largest delta certified by the observable-diameter transfer inequalities.
double dconc_lower_via_od(const FiniteGDS& x, const FiniteGDS& y, const std::vector<double>& kappa_grid);

Bracket dconc_bracket(const FiniteGDS& x, const FiniteGDS& y, const SearchConfig& config = {});

// max(1 - pi(S), 2 * sup-norm orbit Hausdorff distance on S).
double box_objective(const FiniteGDS& x, const FiniteGDS& y, const CouplingMatrix& pi, const std::vector<IndexPair>& s);

Bracket box_bracket(const FiniteGDS& x, const FiniteGDS& y, const SearchConfig& config = {});

}  // namespace gds
