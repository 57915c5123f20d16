#include "gds/scalar_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "gds/errors.hpp"

namespace gds {

double partial_diameter(const DiscreteMeasureR& mu, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidAlpha, "alpha must lie in (0, 1]");
    const auto& a = mu.atoms;
    if (a.empty()) throw Error(ErrorCode::EmptySet, "measure without atoms");
    double best = std::numeric_limits<double>::infinity();
    // Two pointers: for each left end i, the smallest right end j reaching alpha.
    std::size_t j = 0;
    double mass = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (j < i) {
            j = i;
            mass = 0.0;
        }
        while (j < a.size() && mass < alpha - kMassGuard) {
            mass += a[j].mass;
            ++j;
        }
        if (mass < alpha - kMassGuard) break;
        best = std::min(best, a[j - 1].value - a[i].value);
        mass -= a[i].mass;
    }
    // alpha slightly above the total mass can only happen through rounding.
    if (!std::isfinite(best)) best = a.back().value - a.front().value;
    return best;
}

double levy_mean(const DiscreteMeasureR& mu) {
    if (mu.atoms.empty()) throw Error(ErrorCode::EmptySet, "measure without atoms");
    double cdf = 0.0;
    for (const Atom& at : mu.atoms) {
        cdf += at.mass;
        if (cdf >= 0.5 - kMassGuard) return at.value;
    }
    return mu.atoms.back().value;
}

double ky_fan_from_diffs(std::span<const double> diffs, std::span<const double> w) {
    if (diffs.size() != w.size()) throw Error(ErrorCode::DimensionMismatch, "diff and weight lengths differ");
    std::vector<std::size_t> order(diffs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return diffs[a] < diffs[b]; });
    // tail[k] = mass strictly above the k-th distinct value, summed from the top.
    std::vector<double> values;
    std::vector<double> tails;
    {
        std::vector<double> levels;
        std::vector<double> level_mass;
        for (std::size_t idx : order) {
            if (!levels.empty() && levels.back() == diffs[idx])
                level_mass.back() += w[idx];
            else {
                levels.push_back(diffs[idx]);
                level_mass.push_back(w[idx]);
            }
        }
        if (levels.empty() || levels.front() > 0.0) {
            levels.insert(levels.begin(), 0.0);
            level_mass.insert(level_mass.begin(), 0.0);
        }
        tails.assign(levels.size(), 0.0);
        double acc = 0.0;
        for (std::size_t k = levels.size(); k-- > 0;) {
            tails[k] = acc;
            acc += level_mass[k];
        }
        values = std::move(levels);
    }
    // On [v_k, v_{k+1}) the tail mass is constant; the first interval where
    // max(v_k, tail_k) still lies inside gives the infimum.
    for (std::size_t k = 0; k < values.size(); ++k) {
        double cand = std::max(values[k], tails[k] <= kMassGuard ? 0.0 : tails[k]);
        if (k + 1 == values.size() || cand < values[k + 1]) return cand;
    }
    return values.back();
}

double ky_fan_weighted(std::span<const double> f, std::span<const double> g, std::span<const double> w) {
    if (f.size() != g.size() || f.size() != w.size())
        throw Error(ErrorCode::DimensionMismatch, "feature and weight lengths differ");
    std::vector<double> d(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) d[i] = std::abs(f[i] - g[i]);
    return ky_fan_from_diffs(d, w);
}

double bipartite_max_flow(const std::vector<double>& left_cap, const std::vector<double>& right_cap,
                          const std::vector<std::vector<std::size_t>>& adj) {
    // Dinic on a small explicit graph.
    const std::size_t L = left_cap.size(), R = right_cap.size();
    const std::size_t S = L + R, T = L + R + 1, V = L + R + 2;
    struct Edge {
        std::size_t to;
        double cap;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<std::size_t>> g(V);
    auto add = [&](std::size_t a, std::size_t b, double c) {
        g[a].push_back(edges.size());
        edges.push_back({b, c});
        g[b].push_back(edges.size());
        edges.push_back({a, 0.0});
    };
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < L; ++l) add(S, l, left_cap[l]);
    for (std::size_t r = 0; r < R; ++r) add(L + r, T, right_cap[r]);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t r : adj[l]) add(l, L + r, inf);

    const double eps = 1e-15;
    double flow = 0.0;
    std::vector<int> level(V);
    std::vector<std::size_t> it(V);
    auto bfs = [&]() {
        std::fill(level.begin(), level.end(), -1);
        std::queue<std::size_t> q;
        level[S] = 0;
        q.push(S);
        while (!q.empty()) {
            std::size_t v = q.front();
            q.pop();
            for (std::size_t e : g[v])
                if (edges[e].cap > eps && level[edges[e].to] < 0) {
                    level[edges[e].to] = level[v] + 1;
                    q.push(edges[e].to);
                }
        }
        return level[T] >= 0;
    };
    auto dfs = [&](auto&& self, std::size_t v, double pushed) -> double {
        if (v == T) return pushed;
        for (; it[v] < g[v].size(); ++it[v]) {
            std::size_t e = g[v][it[v]];
            Edge& ed = edges[e];
            if (ed.cap > eps && level[ed.to] == level[v] + 1) {
                double got = self(self, ed.to, std::min(pushed, ed.cap));
                if (got > 0.0) {
                    ed.cap -= got;
                    edges[e ^ 1].cap += got;
                    return got;
                }
            }
        }
        return 0.0;
    };
    while (bfs()) {
        std::fill(it.begin(), it.end(), 0);
        while (double f = dfs(dfs, S, inf)) flow += f;
    }
    return flow;
}

double prohorov(const DiscreteMeasureR& mu, const DiscreteMeasureR& nu) {
    const auto& x = mu.atoms;
    const auto& y = nu.atoms;
    if (x.empty() || y.empty()) throw Error(ErrorCode::EmptySet, "measure without atoms");
    std::vector<double> t{0.0};
    for (const Atom& a : x)
        for (const Atom& b : y) t.push_back(std::abs(a.value - b.value));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());

    std::vector<double> ycap(y.size()), xcap(x.size());
    for (std::size_t j = 0; j < y.size(); ++j) ycap[j] = y[j].mass;
    for (std::size_t i = 0; i < x.size(); ++i) xcap[i] = x[i].mass;

    // For eps in (t_k, t_{k+1}] the open neighbourhoods connect exactly the
    // pairs at distance <= t_k. Feasible there iff eps >= 1 - maxflow_k.
    auto deficit_at = [&](double tk) {
        std::vector<std::vector<std::size_t>> adj(y.size());
        for (std::size_t j = 0; j < y.size(); ++j)
            for (std::size_t i = 0; i < x.size(); ++i)
                if (std::abs(x[i].value - y[j].value) <= tk) adj[j].push_back(i);
        double need = 1.0 - bipartite_max_flow(ycap, xcap, adj);
        return need <= kMassGuard ? 0.0 : need;
    };
    // deficit is nonincreasing in k: binary search for the first interval that works.
    auto works = [&](std::size_t k) {
        double need = deficit_at(t[k]);
        return k + 1 == t.size() || need <= t[k + 1];
    };
    std::size_t lo = 0, hi = t.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (works(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return std::max(t[lo], deficit_at(t[lo]));
}

double hausdorff(std::size_t na, std::size_t nb, const std::function<double(std::size_t, std::size_t)>& dist) {
    if (na == 0 || nb == 0) throw Error(ErrorCode::EmptySet, "Hausdorff distance needs nonempty sets");
    std::vector<double> col_min(nb, std::numeric_limits<double>::infinity());
    double h = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        double row_min = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < nb; ++j) {
            double d = dist(i, j);
            row_min = std::min(row_min, d);
            col_min[j] = std::min(col_min[j], d);
        }
        h = std::max(h, row_min);
    }
    for (double c : col_min) h = std::max(h, c);
    return h;
}

}  // namespace gds
