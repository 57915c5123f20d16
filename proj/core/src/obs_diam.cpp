#include "gds/obs_diam.hpp"

#include <algorithm>

#include "gds/errors.hpp"
#include "gds/scalar_stats.hpp"

namespace gds {

namespace {

void check_kappa(double kappa) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorCode::InvalidKappa, "kappa must lie in (0, 1)");
}

}  // namespace

double observable_diameter(const FiniteGDS& x, double kappa) {
    check_kappa(kappa);
    double od = 0.0;
    for (const Row& f : x.generators()) od = std::max(od, partial_diameter(pushforward(f, x.mu()), 1.0 - kappa));
    return od;
}

double observable_diameter_ext(const FiniteGDS& x, double kappa) {
    if (kappa >= 1.0) return 0.0;
    return observable_diameter(x, kappa);
}

double observable_diameter_hss(const Matrix& d, const ProbVector& mu, double kappa, double tol) {
    check_kappa(kappa);
    if (d.size() != mu.size()) throw Error(ErrorCode::DimensionMismatch, "distance matrix size does not match weights");
    check_metric(d, tol);
    double od = 0.0;
    for (const Row& row : d) od = std::max(od, partial_diameter(pushforward(row, mu), 1.0 - kappa));
    return od;
}

std::vector<double> od_profile(const FiniteGDS& x, const std::vector<double>& kappas) {
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        check_kappa(kappas[i]);
        if (i > 0 && !(kappas[i] > kappas[i - 1]))
            throw Error(ErrorCode::InvalidKappa, "kappa grid must be strictly increasing");
    }
    std::vector<double> out;
    out.reserve(kappas.size());
    for (double k : kappas) {
        double v = observable_diameter(x, k);
        if (!out.empty() && v > out.back())
            throw Error(ErrorCode::MonotonicityViolation,
                        "od increased between kappa=" + std::to_string(kappas[out.size() - 1]) +
                            " and kappa=" + std::to_string(k));
        out.push_back(v);
    }
    return out;
}

}  // namespace gds
