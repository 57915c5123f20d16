#include "gds/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "gds/errors.hpp"
#include "gds/lip_families.hpp"

namespace gds {

QuotientResult quotient(const FiniteGDS& x, const Matrix& g) {
    if (g.empty()) throw Error(ErrorCode::EmptyG, "quotient needs at least one feature row");
    const std::size_t n = x.num_points();
    for (const Row& r : g)
        if (r.size() != n) throw Error(ErrorCode::DimensionMismatch, "feature row length differs from point count");

    std::map<std::vector<double>, std::size_t> classes;
    QuotientResult out;
    out.map.resize(n);
    std::vector<std::size_t> first;
    std::vector<double> mass;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> key(g.size());
        for (std::size_t r = 0; r < g.size(); ++r) key[r] = g[r][i];
        auto [it, inserted] = classes.emplace(std::move(key), first.size());
        if (inserted) {
            first.push_back(i);
            mass.push_back(0.0);
        }
        out.map[i] = it->second;
        mass[it->second] += x.mu()[i];
    }
    std::vector<std::string> ids;
    for (std::size_t i : first) ids.push_back(x.point_ids()[i]);
    Matrix gens(g.size(), Row(first.size()));
    for (std::size_t r = 0; r < g.size(); ++r)
        for (std::size_t k = 0; k < first.size(); ++k) gens[r][k] = g[r][first[k]];
    // Renormalise against round-off so the result passes validation.
    double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (total != 1.0)
        for (double& m : mass) m /= total;
    out.space = validate_gds(std::move(ids), std::move(gens), x.family(), std::move(mass));
    return out;
}

void validate_spec(const FiniteGDS& x, const MeasurementSpec& spec) {
    if (spec.features.empty()) throw Error(ErrorCode::InvalidSpec, "measurement needs at least one feature");
    for (std::size_t i : spec.features)
        if (i >= x.num_generators())
            throw Error(ErrorCode::InvalidSpec, "feature index " + std::to_string(i) + " out of range");
    if (!(spec.R > 0.0)) throw Error(ErrorCode::InvalidSpec, "R must be positive");
}

FiniteGDS measurement(const FiniteGDS& x, const MeasurementSpec& spec) {
    validate_spec(x, spec);
    Matrix rows;
    for (std::size_t i : spec.features) rows.push_back(clip_apply(ClipMap::bound(spec.R), x.generator(i)));
    return quotient(x, rows).space;
}

namespace {

// Binomial coefficient saturating at `cap`.
std::size_t choose_capped(std::size_t m, std::size_t k, std::size_t cap) {
    long double c = 1.0L;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * static_cast<long double>(m - k + i) / static_cast<long double>(i);
        if (c > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::size_t>(std::llround(static_cast<double>(c)));
}

}  // namespace

MeasurementSet enumerate_measurements(const FiniteGDS& x, std::size_t n, double r, std::size_t budget,
                                      std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::InvalidSpec, "N must be at least 1");
    if (budget == 0) throw Error(ErrorCode::InvalidSpec, "budget must be positive");
    MeasurementSet out;
    const std::size_t m = x.num_generators();
    if (m == 0) return out;
    const std::size_t k = std::min(n, m);
    std::vector<std::vector<std::size_t>> subsets;
    if (choose_capped(m, k, budget) <= budget) {
        std::vector<std::size_t> cur(k);
        std::iota(cur.begin(), cur.end(), 0);
        while (true) {
            subsets.push_back(cur);
            std::size_t i = k;
            while (i > 0 && cur[i - 1] == m - k + i - 1) --i;
            if (i == 0) break;
            ++cur[i - 1];
            for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
        }
    } else {
        out.exhaustive = false;
        std::mt19937_64 rng(seed);
        std::set<std::vector<std::size_t>> chosen;
        while (chosen.size() < budget) {
            // Floyd's sampling of a k-subset of {0..m-1}.
            std::set<std::size_t> s;
            for (std::size_t j = m - k; j < m; ++j) {
                std::uniform_int_distribution<std::size_t> d(0, j);
                std::size_t t = d(rng);
                if (!s.insert(t).second) s.insert(j);
            }
            chosen.insert(std::vector<std::size_t>(s.begin(), s.end()));
        }
        subsets.assign(chosen.begin(), chosen.end());
    }
    for (const auto& sub : subsets) {
        MeasurementSpec spec{sub, r};
        out.members.push_back(measurement(x, spec));
        out.specs.push_back(std::move(spec));
    }
    return out;
}

const char* status_name(DominationVerdict::Status s) {
    switch (s) {
        case DominationVerdict::Status::Dominates: return "Dominates";
        case DominationVerdict::Status::NotDominated: return "NotDominated";
        case DominationVerdict::Status::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

// Members of L_Y outside L_X used to probe membership when the families differ.
std::vector<ClipMap> family_probes(const FamilyTag& fy, const FamilyTag& fx, double scale) {
    std::vector<ClipMap> probes;
    if (fy.subset_of(fx)) return probes;
    const double shift = 1.0 + 2.0 * scale;
    const double inf = std::numeric_limits<double>::infinity();
    const ClipMap pool[] = {ClipMap::translation(shift), ClipMap::translation(-shift), ClipMap::bound(0.0),
                            ClipMap::bound(scale / 2.0), ClipMap{0.0, 0.0, inf}, ClipMap{shift, -inf, shift}};
    for (const ClipMap& p : pool)
        if (p.in_family(fy) && !p.in_family(fx)) probes.push_back(p);
    return probes;
}

}  // namespace

DominationVerdict check_domination(const FiniteGDS& x, const FiniteGDS& y, double tol, std::size_t budget) {
    DominationVerdict v;
    const std::size_t nx = x.num_points(), ny = y.num_points();
    const double mass_tol = 1e-9;
    double scale = 0.0;
    for (const Row& g : y.generators())
        for (double val : g) scale = std::max(scale, std::abs(val));
    std::vector<ClipMap> probes = family_probes(y.family(), x.family(), scale);
    if (!probes.empty()) v.certified = false;
    if (x.family().kind == FamilyTag::Kind::Lip1Sampled) v.certified = false;

    std::vector<std::size_t> phi(nx);
    std::vector<double> rem(ny);
    for (std::size_t j = 0; j < ny; ++j) rem[j] = y.mu()[j];
    double best_gap = std::numeric_limits<double>::infinity();
    std::string best_note = "no measure-preserving point map exists";
    bool found = false, exhausted = false;
    std::size_t nodes = 0;
    const std::size_t node_cap = budget * 64 + 1024;

    auto test_map = [&]() {
        double worst = 0.0;
        std::string note;
        for (std::size_t j = 0; j < y.num_generators() && worst <= tol; ++j) {
            Row pulled(nx);
            for (std::size_t i = 0; i < nx; ++i) pulled[i] = y.generator(j)[phi[i]];
            std::vector<Row> targets{pulled};
            for (const ClipMap& p : probes) targets.push_back(clip_apply(p, pulled));
            for (const Row& t : targets) {
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t f = 0; f < x.num_generators() && best > tol; ++f)
                    best = std::min(best, dist_to_orbit(t, x.generator(f), x.family(), x.mu()).value);
                if (x.num_generators() == 0) {
                    bool constant = std::all_of(t.begin(), t.end(), [&](double a) { return a == t.front(); });
                    best = constant && nx == 1 ? 0.0 : std::numeric_limits<double>::infinity();
                }
                if (best > worst) {
                    worst = best;
                    note = "Y feature " + std::to_string(j) + " pulled back lies at orbit distance " +
                           std::to_string(best) + " > tol";
                }
            }
        }
        if (worst <= tol) return true;
        if (worst < best_gap) {
            best_gap = worst;
            best_note = note;
        }
        return false;
    };

    auto dfs = [&](auto&& self, std::size_t i) -> void {
        if (found || exhausted) return;
        if (++nodes > node_cap) {
            exhausted = true;
            return;
        }
        if (i == nx) {
            for (double r : rem)
                if (std::abs(r) > mass_tol) return;
            if (++v.maps_examined > budget) {
                exhausted = true;
                return;
            }
            if (test_map()) {
                found = true;
                v.witness_map = phi;
            }
            return;
        }
        for (std::size_t j = 0; j < ny && !found && !exhausted; ++j) {
            if (rem[j] + mass_tol < x.mu()[i]) continue;
            phi[i] = j;
            rem[j] -= x.mu()[i];
            self(self, i + 1);
            rem[j] += x.mu()[i];
        }
    };
    dfs(dfs, 0);

    if (found) {
        v.status = DominationVerdict::Status::Dominates;
        v.certificate = v.certified ? "witness map verified" : "witness map verified on sampled family members";
        v.exhaustive = !exhausted;
    } else if (exhausted) {
        v.status = DominationVerdict::Status::Unknown;
        v.certificate = "budget exhausted; best candidate: " + best_note;
    } else {
        v.status = DominationVerdict::Status::NotDominated;
        v.certificate = best_note;
        v.exhaustive = true;
    }
    if (exhausted) v.maps_examined = std::min(v.maps_examined, budget);
    return v;
}

bool is_isomorphic(const FiniteGDS& a, const FiniteGDS& b, std::size_t max_points) {
    const std::size_t n = a.num_points();
    if (n != b.num_points() || a.num_generators() != b.num_generators() || !(a.family() == b.family())) return false;
    if (n > max_points) throw Error(ErrorCode::TooLarge, "isomorphism search limited to small data sets");
    auto sorted_rows = [](Matrix rows) {
        std::sort(rows.begin(), rows.end());
        return rows;
    };
    const Matrix target = sorted_rows(b.generators());
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = std::abs(a.mu()[i] - b.mu()[perm[i]]) <= kMassGuard;
        if (!ok) continue;
        // Row r of b evaluated at the image of point i: build a's rows in b's point order.
        Matrix mapped(a.num_generators(), Row(n));
        for (std::size_t r = 0; r < a.num_generators(); ++r)
            for (std::size_t i = 0; i < n; ++i) mapped[r][perm[i]] = a.generator(r)[i];
        if (sorted_rows(std::move(mapped)) == target) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace gds
