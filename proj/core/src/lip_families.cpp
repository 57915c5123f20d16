#include "gds/lip_families.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "gds/errors.hpp"
#include "gds/scalar_stats.hpp"
#include "gds/transforms.hpp"

namespace gds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clampd(double x, double lo, double hi) { return std::max(lo, std::min(x, hi)); }

}  // namespace

ClipMap ClipMap::make(double c, double l, double u) {
    if (!std::isfinite(c) || std::isnan(l) || std::isnan(u) || l == kInf || u == -kInf || l > u)
        throw Error(ErrorCode::InvalidRange, "clip map needs finite c and l <= u");
    return {c, l, u};
}

ClipMap ClipMap::after(const ClipMap& inner) const {
    // clamp(clamp(x + c1, l1, u1) + c2, l2, u2) = clamp(x + c1 + c2, l', u')
    double lo = clampd(inner.l + c, l, u);
    double hi = clampd(inner.u + c, l, u);
    return {inner.c + c, lo, hi};
}

bool ClipMap::in_family(const FamilyTag& family) const {
    using K = FamilyTag::Kind;
    const bool unbounded = l == -kInf && u == kInf;
    switch (family.kind) {
        case K::Identity: return c == 0.0 && unbounded;
        case K::T: return unbounded;
        case K::B: return c == 0.0 && l == -u && u >= 0.0;
        case K::TB:
        case K::Lip1Sampled: return l <= u;
    }
    return false;
}

Row clip_apply(const ClipMap& p, std::span<const double> f) {
    Row out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = p(f[i]);
    return out;
}

double Lip1Map::operator()(double x) const {
    if (knots.empty()) return x;
    if (x <= knots.front()) return values.front();
    if (x >= knots.back()) return values.back();
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    std::size_t k = static_cast<std::size_t>(it - knots.begin());
    double t = (x - knots[k - 1]) / (knots[k] - knots[k - 1]);
    return values[k - 1] + t * (values[k] - values[k - 1]);
}

bool Lip1Map::is_one_lipschitz(double tol) const {
    for (std::size_t k = 1; k < knots.size(); ++k)
        if (std::abs(values[k] - values[k - 1]) > (knots[k] - knots[k - 1]) + tol) return false;
    return true;
}

namespace {

// Weighted (f, g) pairs with duplicates merged and zero weights dropped.
struct Pts {
    std::vector<double> f, g, w;
    std::size_t size() const { return f.size(); }
};

Pts aggregate(std::span<const double> f, std::span<const double> g, std::span<const double> w) {
    if (f.size() != g.size() || f.size() != w.size())
        throw Error(ErrorCode::DimensionMismatch, "feature rows and weights differ in length");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (w[i] > 0.0) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return f[a] != f[b] ? f[a] < f[b] : g[a] < g[b];
    });
    Pts p;
    for (std::size_t i : idx) {
        if (!p.f.empty() && p.f.back() == f[i] && p.g.back() == g[i]) {
            p.w.back() += w[i];
        } else {
            p.f.push_back(f[i]);
            p.g.push_back(g[i]);
            p.w.push_back(w[i]);
        }
    }
    return p;
}

double scale_of(std::span<const double> f, std::span<const double> g) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
}

double slack_for(double scale) { return 1e-12 * (1.0 + scale); }

std::vector<double> finalize_events(std::vector<double> ev, double slack, double cap) {
    ev.push_back(0.0);
    for (double& e : ev) e = std::abs(e);
    std::sort(ev.begin(), ev.end());
    std::vector<double> out;
    for (double e : ev) {
        if (e > cap) break;
        if (out.empty() || e > out.back() + slack) out.push_back(e);
    }
    if (out.back() < cap) out.push_back(cap);
    return out;
}

std::vector<double> events_translation(const std::vector<double>& f, const std::vector<double>& g) {
    std::vector<double> ev;
    for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t b = a + 1; b < f.size(); ++b) ev.push_back(((f[a] - g[a]) - (f[b] - g[b])) / 2.0);
    return ev;
}

std::vector<double> events_bound(const std::vector<double>& f, const std::vector<double>& g) {
    std::vector<double> ev;
    for (std::size_t s = 0; s < f.size(); ++s) {
        ev.push_back(f[s]);
        ev.push_back(f[s] - g[s]);
        for (std::size_t r = 0; r < f.size(); ++r) {
            ev.push_back(f[s] - ClipMap::bound(std::abs(g[r]))(g[s]));
            ev.push_back((f[s] - f[r]) / 2.0);
            ev.push_back((f[s] + f[r]) / 2.0);
        }
    }
    return ev;
}

std::vector<double> events_tb(const std::vector<double>& f, const std::vector<double>& g) {
    std::vector<double> ev = events_translation(f, g);
    for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t b = a + 1; b < f.size(); ++b) ev.push_back((f[a] - f[b]) / 2.0);
    return ev;
}

struct Fit {
    double mass = -1.0;
    ClipMap p;
};

double good_mass(const Pts& p, const ClipMap& m, double eps) {
    double mass = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s)
        if (std::abs(p.f[s] - m(p.g[s])) <= eps) mass += p.w[s];
    return mass;
}

// Map parameters are built from eps itself; membership tests allow tol on
// top so that rounding in the parameters never loses a point.
Fit fit_translation(const Pts& p, double eps, double tol) {
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> r(p.size());
    for (std::size_t s = 0; s < p.size(); ++s) r[s] = p.f[s] - p.g[s];
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r[a] < r[b]; });
    Fit best;
    std::size_t j = 0;
    double mass = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (j < i) {
            j = i;
            mass = 0.0;
        }
        while (j < order.size() && r[order[j]] - r[order[i]] <= 2.0 * eps + tol) {
            mass += p.w[order[j]];
            ++j;
        }
        if (mass > best.mass) best = {mass, ClipMap::translation((r[order[i]] + r[order[j - 1]]) / 2.0)};
        if (j > i) mass -= p.w[order[i]];
    }
    return best;
}

Fit fit_bound(const Pts& p, double eps, double tol) {
    std::vector<double> cand{kInf, 0.0};
    for (std::size_t s = 0; s < p.size(); ++s) {
        cand.push_back(std::abs(p.g[s]));
        cand.push_back(std::abs(p.f[s] - eps));
        cand.push_back(std::abs(p.f[s] + eps));
    }
    std::sort(cand.begin(), cand.end(), std::greater<>());
    Fit best;
    for (double R : cand) {
        ClipMap m = ClipMap::bound(R);
        double mass = good_mass(p, m, eps + tol);
        if (mass > best.mass) best = {mass, m};
    }
    return best;
}

Fit fit_tb(const Pts& p, double eps, double tol) {
    const std::size_t n = p.size();
    // lo/hi give the parameters, loT/hiT the tolerant membership bounds.
    std::vector<double> lo(n), hi(n), loT(n), hiT(n);
    for (std::size_t s = 0; s < n; ++s) {
        lo[s] = p.f[s] - eps;
        hi[s] = p.f[s] + eps;
        loT[s] = lo[s] - tol;
        hiT[s] = hi[s] + tol;
    }
    std::vector<double> cs;
    double spread = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        cs.push_back(lo[s] - p.g[s]);
        spread = std::max(spread, std::abs(p.g[s]) + std::abs(p.f[s]));
    }
    double cmin = *std::min_element(cs.begin(), cs.end());
    cs.push_back(cmin - 2.0 * spread - 2.0 * eps - 1.0);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());

    Fit best;
    std::vector<std::size_t> A, B, C;
    for (double c : cs) {
        A.clear();
        B.clear();
        C.clear();
        for (std::size_t s = 0; s < n; ++s) {
            double t = p.g[s] + c;
            if (t < loT[s])
                A.push_back(s);
            else if (t > hiT[s])
                C.push_back(s);
            else
                B.push_back(s);
        }
        std::vector<double> ls{-kInf}, us;
        for (std::size_t s : A) ls.push_back(lo[s]);
        for (std::size_t s : C) us.push_back(hi[s]);
        us.push_back(kInf);
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        std::sort(us.begin(), us.end());
        us.erase(std::unique(us.begin(), us.end()), us.end());

        std::vector<double> cu(us.size(), 0.0);
        for (std::size_t k = 0; k < us.size(); ++k)
            for (std::size_t s : C)
                if (loT[s] <= us[k] && us[k] <= hiT[s]) cu[k] += p.w[s];

        std::sort(B.begin(), B.end(), [&](std::size_t a, std::size_t b) { return loT[a] < loT[b]; });
        std::vector<double> blo(B.size());
        for (std::size_t k = 0; k < B.size(); ++k) blo[k] = loT[B[k]];
        std::vector<double> prefix(B.size() + 1);

        for (double l : ls) {
            double al = 0.0;
            for (std::size_t s : A)
                if (loT[s] <= l && l <= hiT[s]) al += p.w[s];
            prefix[0] = 0.0;
            for (std::size_t k = 0; k < B.size(); ++k)
                prefix[k + 1] = prefix[k] + (hiT[B[k]] >= l ? p.w[B[k]] : 0.0);
            for (std::size_t k = 0; k < us.size(); ++k) {
                double u = us[k];
                if (u < l) continue;
                std::size_t cnt = static_cast<std::size_t>(std::upper_bound(blo.begin(), blo.end(), u) - blo.begin());
                double total = al + cu[k] + prefix[cnt];
                if (total > best.mass) best = {total, ClipMap{c, l, u}};
            }
        }
    }
    return best;
}

// Deterministic 1-Lipschitz piecewise-linear candidates through the distinct g values.
struct Lip1Search {
    double value = kInf;
    Lip1Map map;
};

Lip1Search lip1_sampled_search(const Pts& p, std::size_t budget, std::uint64_t seed) {
    Lip1Search best;
    if (p.size() == 0) return best;
    std::vector<double> knots = p.g;
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<std::vector<std::size_t>> at(knots.size());
    for (std::size_t s = 0; s < p.size(); ++s) {
        auto k = static_cast<std::size_t>(std::lower_bound(knots.begin(), knots.end(), p.g[s]) - knots.begin());
        at[k].push_back(s);
    }
    auto weighted_median = [&](std::size_t k) {
        std::vector<std::size_t> pts = at[k];
        std::sort(pts.begin(), pts.end(), [&](std::size_t a, std::size_t b) { return p.f[a] < p.f[b]; });
        double tot = 0.0;
        for (std::size_t s : pts) tot += p.w[s];
        double acc = 0.0;
        for (std::size_t s : pts) {
            acc += p.w[s];
            if (acc >= tot / 2.0) return p.f[s];
        }
        return p.f[pts.back()];
    };
    auto evaluate = [&](const std::vector<double>& vals) {
        Lip1Map m{knots, vals};
        std::vector<double> diffs(p.size());
        for (std::size_t s = 0; s < p.size(); ++s) {
            auto k = static_cast<std::size_t>(std::lower_bound(knots.begin(), knots.end(), p.g[s]) - knots.begin());
            diffs[s] = std::abs(p.f[s] - vals[k]);
        }
        double v = ky_fan_from_diffs(diffs, p.w);
        if (v < best.value) best = {v, std::move(m)};
    };
    auto project = [&](std::vector<double> target) {
        for (std::size_t k = 1; k < knots.size(); ++k) {
            double step = knots[k] - knots[k - 1];
            target[k] = clampd(target[k], target[k - 1] - step, target[k - 1] + step);
        }
        return target;
    };
    std::vector<double> med(knots.size());
    for (std::size_t k = 0; k < knots.size(); ++k) med[k] = weighted_median(k);
    evaluate(project(med));
    {
        // Backward projection as well, so the anchor can sit at either end.
        std::vector<double> rev = med;
        for (std::size_t k = knots.size() - 1; k-- > 0;) {
            double step = knots[k + 1] - knots[k];
            rev[k] = clampd(rev[k], rev[k + 1] - step, rev[k + 1] + step);
        }
        evaluate(rev);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t b = 0; b < budget; ++b) {
        std::vector<double> target(knots.size());
        for (std::size_t k = 0; k < knots.size(); ++k) {
            const auto& pts = at[k];
            std::size_t pick = pts[static_cast<std::size_t>(unit(rng) * static_cast<double>(pts.size())) % pts.size()];
            target[k] = unit(rng) < 0.5 ? p.f[pick] : med[k];
        }
        evaluate(project(target));
    }
    return best;
}

template <class FitFn>
OrbitDistanceResult solve_ky_fan(const Pts& p, const std::vector<double>& events, double slack, FitFn fit) {
    auto feasible = [&](std::size_t k, Fit& out) {
        out = fit(p, events[k], slack);
        return 1.0 - out.mass <= events[k] + slack;
    };
    std::size_t lo = 0, hi = events.size() - 1;
    Fit at_hi;
    if (!feasible(hi, at_hi)) at_hi = Fit{0.0, ClipMap::identity()};
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        Fit f;
        if (feasible(mid, f)) {
            hi = mid;
            at_hi = f;
        } else {
            lo = mid + 1;
        }
    }
    double value = events[lo];
    Fit witness = at_hi;
    if (lo > 0) {
        Fit prev = fit(p, events[lo - 1], slack);
        double need = 1.0 - prev.mass;
        if (need < events[lo]) {
            value = std::max(events[lo - 1], need);
            witness = prev;
        }
    }
    std::vector<double> diffs(p.size());
    for (std::size_t s = 0; s < p.size(); ++s) diffs[s] = std::abs(p.f[s] - witness.p(p.g[s]));
    double achieved = ky_fan_from_diffs(diffs, p.w);
    return {std::min(value, achieved), witness.p, std::nullopt, true};
}

}  // namespace

OrbitDistanceResult dist_to_orbit_weighted(std::span<const double> f, std::span<const double> g,
                                           std::span<const double> w, const FamilyTag& family, std::uint64_t seed) {
    using K = FamilyTag::Kind;
    Pts p = aggregate(f, g, w);
    if (family.kind == K::Identity) {
        std::vector<double> d(p.size());
        for (std::size_t s = 0; s < p.size(); ++s) d[s] = std::abs(p.f[s] - p.g[s]);
        return {ky_fan_from_diffs(d, p.w), ClipMap::identity(), std::nullopt, true};
    }
    const double slack = slack_for(scale_of(p.f, p.g));
    switch (family.kind) {
        case K::T:
            return solve_ky_fan(p, finalize_events(events_translation(p.f, p.g), slack, 1.0), slack, fit_translation);
        case K::B: return solve_ky_fan(p, finalize_events(events_bound(p.f, p.g), slack, 1.0), slack, fit_bound);
        case K::TB: return solve_ky_fan(p, finalize_events(events_tb(p.f, p.g), slack, 1.0), slack, fit_tb);
        case K::Lip1Sampled: {
            OrbitDistanceResult r = solve_ky_fan(p, finalize_events(events_tb(p.f, p.g), slack, 1.0), slack, fit_tb);
            Lip1Search s = lip1_sampled_search(p, family.sample_budget, seed);
            if (s.value < r.value) {
                r.value = s.value;
                r.lip1_witness = std::move(s.map);
            }
            r.certified = false;
            return r;
        }
        case K::Identity: break;
    }
    return {};
}

namespace {

// Per distinct g value, the interval of admissible targets at tolerance eps.
struct Groups {
    std::vector<double> G, fmin, fmax;
};

Groups group_by_g(std::span<const double> f, std::span<const double> g) {
    std::vector<std::size_t> idx(f.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });
    Groups out;
    for (std::size_t i : idx) {
        if (!out.G.empty() && out.G.back() == g[i]) {
            out.fmin.back() = std::min(out.fmin.back(), f[i]);
            out.fmax.back() = std::max(out.fmax.back(), f[i]);
        } else {
            out.G.push_back(g[i]);
            out.fmin.push_back(f[i]);
            out.fmax.push_back(f[i]);
        }
    }
    return out;
}

std::optional<ClipMap> sup_feasible_bound(const Groups& q, double eps, double tol) {
    std::vector<double> cand{kInf, 0.0};
    for (std::size_t k = 0; k < q.G.size(); ++k) {
        cand.push_back(std::abs(q.G[k]));
        cand.push_back(std::abs(q.fmax[k] - eps));
        cand.push_back(std::abs(q.fmin[k] + eps));
    }
    std::sort(cand.begin(), cand.end(), std::greater<>());
    for (double R : cand) {
        ClipMap m = ClipMap::bound(R);
        bool ok = true;
        for (std::size_t k = 0; k < q.G.size() && ok; ++k) {
            double v = m(q.G[k]);
            ok = q.fmax[k] - eps - tol <= v && v <= q.fmin[k] + eps + tol;
        }
        if (ok) return m;
    }
    return std::nullopt;
}

std::optional<ClipMap> sup_feasible_tb(const Groups& q, double eps, double tol) {
    const std::size_t m = q.G.size();
    std::vector<double> lo(m), hi(m);
    for (std::size_t k = 0; k < m; ++k) {
        lo[k] = q.fmax[k] - eps;
        hi[k] = q.fmin[k] + eps;
        if (lo[k] > hi[k] + 2.0 * tol) return std::nullopt;
    }
    std::vector<double> cs;
    double spread = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        cs.push_back(lo[k] - q.G[k]);
        cs.push_back(hi[k] - q.G[k]);
        spread = std::max(spread, std::abs(q.G[k]) + std::abs(q.fmin[k]) + std::abs(q.fmax[k]));
    }
    double cmin = *std::min_element(cs.begin(), cs.end());
    double cmax = *std::max_element(cs.begin(), cs.end());
    cs.push_back(cmin - 2.0 * spread - 2.0 * eps - 1.0);
    cs.push_back(cmax + 2.0 * spread + 2.0 * eps + 1.0);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    for (double c : cs) {
        double lmin = -kInf, lmax = kInf, umin = -kInf, umax = kInf;
        for (std::size_t k = 0; k < m; ++k) {
            double t = q.G[k] + c;
            if (t < lo[k] - tol) {
                lmin = std::max(lmin, lo[k]);
                lmax = std::min(lmax, hi[k]);
            } else if (t > hi[k] + tol) {
                umin = std::max(umin, lo[k]);
                umax = std::min(umax, hi[k]);
            } else {
                lmax = std::min(lmax, hi[k]);
                umin = std::max(umin, lo[k]);
            }
        }
        if (lmin <= lmax + 2.0 * tol && umin <= umax + 2.0 * tol && lmin <= umax + 2.0 * tol)
            return ClipMap{c, std::min(lmin, umax), umax};
    }
    return std::nullopt;
}

double sup_error(std::span<const double> f, std::span<const double> g, const ClipMap& m) {
    double e = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) e = std::max(e, std::abs(f[i] - m(g[i])));
    return e;
}

}  // namespace

OrbitDistanceResult sup_dist_to_orbit(std::span<const double> f, std::span<const double> g, const FamilyTag& family) {
    using K = FamilyTag::Kind;
    if (f.size() != g.size()) throw Error(ErrorCode::DimensionMismatch, "feature rows differ in length");
    if (f.empty()) throw Error(ErrorCode::EmptySupport, "sup distance over an empty set");
    switch (family.kind) {
        case K::Identity: return {sup_error(f, g, ClipMap::identity()), ClipMap::identity(), std::nullopt, true};
        case K::T: {
            double rmin = kInf, rmax = -kInf;
            for (std::size_t i = 0; i < f.size(); ++i) {
                rmin = std::min(rmin, f[i] - g[i]);
                rmax = std::max(rmax, f[i] - g[i]);
            }
            ClipMap m = ClipMap::translation((rmin + rmax) / 2.0);
            return {std::min((rmax - rmin) / 2.0, sup_error(f, g, m)), m, std::nullopt, true};
        }
        case K::Lip1Sampled: {
            Groups q = group_by_g(f, g);
            double eps = 0.0;
            for (std::size_t k = 0; k < q.G.size(); ++k)
                for (std::size_t j = 0; j < q.G.size(); ++j)
                    eps = std::max(eps, (q.fmax[k] - q.fmin[j] - std::abs(q.G[k] - q.G[j])) / 2.0);
            // McShane: smallest admissible upper envelope, clipped to each interval.
            Lip1Map m;
            m.knots = q.G;
            m.values.resize(q.G.size());
            for (std::size_t k = 0; k < q.G.size(); ++k) {
                double v = kInf;
                for (std::size_t j = 0; j < q.G.size(); ++j)
                    v = std::min(v, q.fmin[j] + eps + std::abs(q.G[k] - q.G[j]));
                m.values[k] = v;
            }
            OrbitDistanceResult r{eps, ClipMap::identity(), std::move(m), true};
            // Report a clip witness too when one does as well.
            OrbitDistanceResult tb = sup_dist_to_orbit(f, g, FamilyTag::tb());
            if (tb.value <= eps) {
                r.witness = tb.witness;
                r.lip1_witness.reset();
            }
            return r;
        }
        case K::B:
        case K::TB: {
            Groups q = group_by_g(f, g);
            std::vector<double> ev = family.kind == K::B ? events_bound(q.fmin, q.G) : events_tb(q.fmin, q.G);
            {
                std::vector<double> more = family.kind == K::B ? events_bound(q.fmax, q.G) : events_tb(q.fmax, q.G);
                ev.insert(ev.end(), more.begin(), more.end());
                // Mixed pairs between group minima and maxima.
                for (std::size_t a = 0; a < q.G.size(); ++a)
                    for (std::size_t b = 0; b < q.G.size(); ++b) {
                        ev.push_back((q.fmax[a] - q.fmin[b]) / 2.0);
                        ev.push_back(((q.fmax[a] - q.G[a]) - (q.fmin[b] - q.G[b])) / 2.0);
                        if (family.kind == K::B) {
                            ev.push_back((q.fmax[a] + q.fmin[b]) / 2.0);
                            ev.push_back(q.fmax[a] - ClipMap::bound(std::abs(q.G[b]))(q.G[a]));
                            ev.push_back(q.fmin[a] - ClipMap::bound(std::abs(q.G[b]))(q.G[a]));
                        }
                    }
            }
            double cap = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) cap = std::max(cap, std::abs(f[i]) + std::abs(g[i]));
            const double slack = slack_for(scale_of(f, g));
            std::vector<double> events = finalize_events(ev, slack, cap);
            auto feasible = [&](double eps) {
                return family.kind == K::B ? sup_feasible_bound(q, eps, slack) : sup_feasible_tb(q, eps, slack);
            };
            std::size_t lo = 0, hi = events.size() - 1;
            std::optional<ClipMap> best = feasible(events[hi]);
            while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (auto m = feasible(events[mid])) {
                    hi = mid;
                    best = m;
                } else {
                    lo = mid + 1;
                }
            }
            ClipMap w = best.value_or(ClipMap::bound(0.0));
            return {std::min(events[lo], sup_error(f, g, w)), w, std::nullopt, true};
        }
    }
    return {};
}

FiniteGDS compose_family(const FiniteGDS& x, const ClipMap& p) {
    Matrix rows;
    for (const Row& f : x.generators()) rows.push_back(clip_apply(p, f));
    return quotient(x, rows).space;
}

namespace {

Matrix orbit_distance_table(const FiniteGDS& x, bool& certified) {
    const std::size_t m = x.num_generators();
    Matrix d(m, Row(m, 0.0));
    certified = true;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            OrbitDistanceResult r = dist_to_orbit(x.generator(i), x.generator(j), x.family(), x.mu());
            d[i][j] = r.value;
            certified = certified && r.certified;
        }
    return d;
}

constexpr std::size_t kExhaustiveLimit = 12;

}  // namespace

CoveringResult covering_number(const FiniteGDS& x, double eps) {
    if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidRange, "eps must be nonnegative");
    const std::size_t m = x.num_generators();
    CoveringResult out;
    if (m == 0) return out;
    Matrix d = orbit_distance_table(x, out.distances_certified);
    // covers[j] = bitmask of generators within eps of the orbit of j.
    std::vector<std::vector<bool>> covers(m, std::vector<bool>(m));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) covers[j][i] = i == j || d[i][j] < eps;
    if (m <= kExhaustiveLimit) {
        std::vector<std::uint32_t> mask(m, 0);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < m; ++i)
                if (covers[j][i]) mask[j] |= 1u << i;
        const std::uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1u);
        std::size_t best_size = m + 1;
        std::uint32_t best_set = 0;
        for (std::uint32_t s = 1; s <= full; ++s) {
            std::size_t size = static_cast<std::size_t>(std::popcount(s));
            if (size >= best_size) continue;
            std::uint32_t cov = 0;
            for (std::size_t j = 0; j < m; ++j)
                if (s & (1u << j)) cov |= mask[j];
            if (cov == full) {
                best_size = size;
                best_set = s;
            }
        }
        out.value = best_size;
        for (std::size_t j = 0; j < m; ++j)
            if (best_set & (1u << j)) out.centers.push_back(j);
        out.exact = true;
        return out;
    }
    std::vector<bool> covered(m, false);
    std::size_t left = m;
    while (left > 0) {
        std::size_t best = 0, best_gain = 0;
        for (std::size_t j = 0; j < m; ++j) {
            std::size_t gain = 0;
            for (std::size_t i = 0; i < m; ++i) gain += (!covered[i] && covers[j][i]) ? 1 : 0;
            if (gain > best_gain) {
                best_gain = gain;
                best = j;
            }
        }
        out.centers.push_back(best);
        for (std::size_t i = 0; i < m; ++i)
            if (!covered[i] && covers[best][i]) {
                covered[i] = true;
                --left;
            }
    }
    out.value = out.centers.size();
    return out;
}

CapacityResult capacity(const FiniteGDS& x, double eps) {
    if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidRange, "eps must be nonnegative");
    const std::size_t m = x.num_generators();
    CapacityResult out;
    if (m == 0) return out;
    bool certified = true;
    Matrix d = orbit_distance_table(x, certified);
    auto apart = [&](std::size_t i, std::size_t j) { return std::max(d[i][j], d[j][i]) > eps; };
    if (m <= kExhaustiveLimit) {
        std::uint32_t best_set = 1;
        std::size_t best_size = 1;
        for (std::uint32_t s = 1; s < (1u << m); ++s) {
            std::size_t size = static_cast<std::size_t>(std::popcount(s));
            if (size <= best_size) continue;
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i)
                if (s & (1u << i))
                    for (std::size_t j = i + 1; j < m && ok; ++j)
                        if ((s & (1u << j)) && !apart(i, j)) ok = false;
            if (ok) {
                best_size = size;
                best_set = s;
            }
        }
        for (std::size_t j = 0; j < m; ++j)
            if (best_set & (1u << j)) out.members.push_back(j);
        out.value = best_size;
        out.exact = true;
        return out;
    }
    for (std::size_t i = 0; i < m; ++i) {
        bool ok = true;
        for (std::size_t j : out.members) ok = ok && apart(i, j);
        if (ok) out.members.push_back(i);
    }
    out.value = out.members.size();
    return out;
}

ExtractionResult extract_bounded(const DiscreteMeasureR& mu, double kappa, double eps, double r) {
    if (!(kappa > 0.0 && kappa < 0.5) || !(eps > 0.0) || !(kappa + eps < 0.5) || !(r > 0.0))
        throw Error(ErrorCode::InvalidRange, "need 0 < kappa, 0 < eps, kappa + eps < 1/2 and r > 0");
    ExtractionResult out;
    out.g = ClipMap{-levy_mean(mu), -r, r};
    std::vector<Atom> mapped;
    for (const Atom& a : mu.atoms) mapped.push_back({out.g(a.value), a.mass});
    out.achieved_pd = partial_diameter(DiscreteMeasureR::from_atoms(std::move(mapped)), 1.0 - kappa);
    out.guarantee_lhs = std::min(r, partial_diameter(mu, 1.0 - (kappa + eps)));
    out.certified = true;
    return out;
}

ExtractionResult extract_bounded_heuristic(const DiscreteMeasureR& mu, double kappa, double r) {
    if (!(kappa > 0.0 && kappa < 1.0) || !(r > 0.0))
        throw Error(ErrorCode::InvalidRange, "need kappa in (0, 1) and r > 0");
    ExtractionResult out;
    out.achieved_pd = -1.0;
    for (const Atom& centre : mu.atoms) {
        ClipMap g{-centre.value, -r, r};
        std::vector<Atom> mapped;
        for (const Atom& a : mu.atoms) mapped.push_back({g(a.value), a.mass});
        double pd = partial_diameter(DiscreteMeasureR::from_atoms(std::move(mapped)), 1.0 - kappa);
        if (pd > out.achieved_pd) {
            out.achieved_pd = pd;
            out.g = g;
        }
    }
    out.guarantee_lhs = std::min(r, partial_diameter(mu, 1.0 - kappa));
    out.certified = false;
    return out;
}

}  // namespace gds
