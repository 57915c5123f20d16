#include "gds/staircase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gds/errors.hpp"
#include "gds/scalar_stats.hpp"
#include "gds/transforms.hpp"

namespace gds {

double series_weight(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidRange, "series index starts at 1");
    return 1.0 / (2.0 * static_cast<double>(n) * std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(n, 2000))));
}

double tail_bound(std::size_t levels) {
    double partial = 0.0;
    for (std::size_t n = 1; n <= levels && n <= 200; ++n) partial += series_weight(n);
    double t = std::numbers::ln2 / 2.0 - partial;
    return std::max(t, 0.0);
}

double tail_bound_for(const FiniteGDS& x, const FiniteGDS& y, std::size_t levels) {
    if (!(x.family() == y.family())) return std::numeric_limits<double>::infinity();
    if (x.family().has_translations()) return tail_bound(levels);
    double m = 0.0;
    for (const FiniteGDS* z : {&x, &y})
        for (const Row& f : z->generators())
            for (double v : f) m = std::max(m, std::abs(v));
    // A singleton support costs at most c * min(N, M) in the sup term.
    const double c = x.family().kind == FamilyTag::Kind::B ? 2.0 : 4.0;
    const std::size_t stop = levels + 64;
    double t = 0.0;
    for (std::size_t n = levels + 1; n <= stop; ++n)
        t += series_weight(n) * std::max(1.0, c * std::min(static_cast<double>(n), m));
    // Beyond `stop`: max(1, c N) <= 1 + c N, whose weighted sum is closed form.
    t += tail_bound(stop) + c * std::ldexp(1.0, -static_cast<int>(stop + 1));
    return t;
}

StaircaseLevel staircase_level(const FiniteGDS& x, std::size_t n, std::size_t budget, std::uint64_t seed) {
    MeasurementSet set = enumerate_measurements(x, n, static_cast<double>(n), budget, seed);
    return {n, std::move(set.members), set.exhaustive};
}

LevelHausdorff level_hausdorff(const StaircaseLevel& a, const StaircaseLevel& b, const SearchConfig& config) {
    if (a.n != b.n) throw Error(ErrorCode::LevelMismatch, "levels have different N");
    if (a.members.empty() || b.members.empty()) throw Error(ErrorCode::EmptySet, "empty staircase level");
    const std::size_t na = a.members.size(), nb = b.members.size();
    Matrix lo(na, Row(nb)), up(na, Row(nb));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            Bracket br = box_bracket(a.members[i], b.members[j], config);
            lo[i][j] = br.lower;
            up[i][j] = br.upper;
        }
    LevelHausdorff out;
    out.estimate = !(a.exhaustive && b.exhaustive);
    out.upper = hausdorff(na, nb, [&](std::size_t i, std::size_t j) { return up[i][j]; });
    out.lower = out.estimate ? 0.0 : hausdorff(na, nb, [&](std::size_t i, std::size_t j) { return lo[i][j]; });
    return out;
}

SeriesBracket staircase_distance(const FiniteGDS& x, const FiniteGDS& y, std::size_t levels,
                                 const StaircaseConfig& config) {
    if (levels == 0) throw Error(ErrorCode::InvalidRange, "truncation level must be at least 1");
    SeriesBracket out;
    out.levels = levels;
    for (std::size_t n = 1; n <= levels; ++n) {
        StaircaseLevel a = staircase_level(x, n, config.budget, config.seed);
        StaircaseLevel b = staircase_level(y, n, config.budget, config.seed);
        LevelHausdorff h = level_hausdorff(a, b, config.search);
        out.partial += series_weight(n) * h.upper;
        out.lower += series_weight(n) * h.lower;
        out.estimate = out.estimate || h.estimate;
        out.per_level.push_back(h);
    }
    out.tail_bound = tail_bound_for(x, y, levels);
    out.interval = {out.lower, out.partial + out.tail_bound};
    return out;
}

SeriesBracket rho_estimate(const FiniteGDS& x, const FiniteGDS& y, std::size_t levels, const StaircaseConfig& config) {
    return staircase_distance(x, y, levels, config);
}

bool measurement_levels_coherent(const FiniteGDS& x, std::size_t m, std::size_t n) {
    if (!(m < n)) throw Error(ErrorCode::InvalidRange, "coherence check needs M < N");
    const std::size_t big = std::numeric_limits<std::size_t>::max() / 2;
    MeasurementSet direct = enumerate_measurements(x, m, static_cast<double>(m), big, 0);
    std::vector<FiniteGDS> nested;
    for (const FiniteGDS& z : enumerate_measurements(x, n, static_cast<double>(n), big, 0).members)
        for (FiniteGDS& w : enumerate_measurements(z, m, static_cast<double>(m), big, 0).members)
            nested.push_back(std::move(w));
    auto covered = [](const std::vector<FiniteGDS>& from, const std::vector<FiniteGDS>& in) {
        return std::all_of(from.begin(), from.end(), [&](const FiniteGDS& a) {
            return std::any_of(in.begin(), in.end(), [&](const FiniteGDS& b) { return is_isomorphic(a, b); });
        });
    };
    return covered(direct.members, nested) && covered(nested, direct.members);
}

}  // namespace gds
