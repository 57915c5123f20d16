#include "gds/set_distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "gds/errors.hpp"
#include "gds/lip_families.hpp"
#include "gds/obs_diam.hpp"
#include "gds/scalar_stats.hpp"

namespace gds {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CouplingMatrix::CouplingMatrix(Matrix pi, const ProbVector& mu_x, const ProbVector& mu_y, double tol)
    : pi_(std::move(pi)) {
    if (pi_.size() != mu_x.size()) throw Error(ErrorCode::MarginalMismatch, "coupling row count differs from |X|");
    std::vector<double> col(mu_y.size(), 0.0);
    for (std::size_t i = 0; i < pi_.size(); ++i) {
        if (pi_[i].size() != mu_y.size())
            throw Error(ErrorCode::MarginalMismatch, "coupling column count differs from |Y|");
        double row = 0.0;
        for (std::size_t j = 0; j < pi_[i].size(); ++j) {
            if (!(pi_[i][j] >= 0.0)) throw Error(ErrorCode::MarginalMismatch, "negative coupling entry");
            row += pi_[i][j];
            col[j] += pi_[i][j];
        }
        if (std::abs(row - mu_x[i]) > tol)
            throw Error(ErrorCode::MarginalMismatch, "row " + std::to_string(i) + " does not sum to mu_X");
    }
    for (std::size_t j = 0; j < col.size(); ++j)
        if (std::abs(col[j] - mu_y[j]) > tol)
            throw Error(ErrorCode::MarginalMismatch, "column " + std::to_string(j) + " does not sum to mu_Y");
}

CouplingMatrix CouplingMatrix::product(const ProbVector& mu_x, const ProbVector& mu_y) {
    Matrix pi(mu_x.size(), Row(mu_y.size()));
    for (std::size_t i = 0; i < mu_x.size(); ++i)
        for (std::size_t j = 0; j < mu_y.size(); ++j) pi[i][j] = mu_x[i] * mu_y[j];
    return CouplingMatrix(std::move(pi), mu_x, mu_y);
}

CouplingMatrix CouplingMatrix::transposed() const {
    CouplingMatrix t;
    t.pi_.assign(cols(), Row(rows()));
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) t.pi_[j][i] = pi_[i][j];
    return t;
}

std::vector<double> default_kappa_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 99; ++k) g.push_back(k / 100.0);
    return g;
}

namespace {

// Directed Hausdorff term sup_{f in F_A} inf_{g in F_B} d(f, L_B o g), valid
// when L_A is contained in L_B; otherwise the trivial bound is returned.
template <class Dist>
double directed_term(const Matrix& fa, const Matrix& gb, const FamilyTag& fam_a, const FamilyTag& fam_b,
                     double trivial, Dist dist) {
    if (!fam_a.subset_of(fam_b)) return trivial;
    double worst = 0.0;
    for (const Row& f : fa) {
        double best = kInf;
        for (const Row& g : gb) {
            best = std::min(best, dist(f, g));
            if (best <= worst) break;
        }
        worst = std::max(worst, best);
    }
    return worst;
}

struct Pulled {
    Matrix fx, gy;  // generator rows restricted to the listed pairs
    std::vector<double> w;
};

Pulled pull_back(const FiniteGDS& x, const FiniteGDS& y, const std::vector<IndexPair>& pairs,
                 const CouplingMatrix* pi) {
    Pulled p;
    for (const Row& f : x.generators()) {
        Row r(pairs.size());
        for (std::size_t k = 0; k < pairs.size(); ++k) r[k] = f[pairs[k].first];
        p.fx.push_back(std::move(r));
    }
    for (const Row& g : y.generators()) {
        Row r(pairs.size());
        for (std::size_t k = 0; k < pairs.size(); ++k) r[k] = g[pairs[k].second];
        p.gy.push_back(std::move(r));
    }
    if (pi)
        for (const auto& [i, j] : pairs) p.w.push_back((*pi)(i, j));
    return p;
}

std::vector<IndexPair> support_of(const CouplingMatrix& pi) {
    std::vector<IndexPair> s;
    for (std::size_t i = 0; i < pi.rows(); ++i)
        for (std::size_t j = 0; j < pi.cols(); ++j)
            if (pi(i, j) > 0.0) s.emplace_back(i, j);
    return s;
}

}  // namespace

double dconc_pi(const FiniteGDS& x, const FiniteGDS& y, const CouplingMatrix& pi) {
    if (pi.rows() != x.num_points() || pi.cols() != y.num_points())
        throw Error(ErrorCode::MarginalMismatch, "coupling shape differs from |X| x |Y|");
    std::vector<IndexPair> s = support_of(pi);
    Pulled p = pull_back(x, y, s, &pi);
    auto kf = [&](const FamilyTag& fam) {
        return [&p, fam](const Row& f, const Row& g) { return dist_to_orbit_weighted(f, g, p.w, fam).value; };
    };
    double xy = directed_term(p.fx, p.gy, x.family(), y.family(), 1.0, kf(y.family()));
    if (xy >= 1.0) return xy;
    double yx = directed_term(p.gy, p.fx, y.family(), x.family(), 1.0, kf(x.family()));
    return std::max(xy, yx);
}

namespace {

std::vector<double> od_breakpoints(const FiniteGDS& x) {
    std::vector<double> out;
    for (const Row& f : x.generators()) {
        DiscreteMeasureR m = pushforward(f, x.mu());
        for (std::size_t i = 0; i < m.atoms.size(); ++i) {
            double mass = 0.0;
            for (std::size_t j = i; j < m.atoms.size(); ++j) {
                mass += m.atoms[j].mass;
                out.push_back(1.0 - mass);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Smallest delta >= 0 with od(X; -(kappa + delta)) <= od(Y; -kappa) + 2 delta.
double transfer_delta(const FiniteGDS& x, const std::vector<double>& breaks_x, const FiniteGDS& y, double kappa) {
    const double rhs = observable_diameter_ext(y, kappa);
    std::vector<double> starts{0.0};
    for (double b : breaks_x)
        if (b > kappa) starts.push_back(b - kappa);
    if (1.0 - kappa > starts.back()) starts.push_back(1.0 - kappa);
    for (std::size_t k = 0; k < starts.size(); ++k) {
        double v = observable_diameter_ext(x, kappa + starts[k]);
        double cand = std::max(starts[k], (v - rhs) / 2.0);
        if (k + 1 == starts.size() || cand < starts[k + 1]) return cand;
    }
    return starts.back();
}

}  // namespace

double dconc_lower_via_od(const FiniteGDS& x, const FiniteGDS& y, const std::vector<double>& kappa_grid) {
    const std::vector<double> grid = kappa_grid.empty() ? default_kappa_grid() : kappa_grid;
    const std::vector<double> bx = od_breakpoints(x), by = od_breakpoints(y);
    double lower = 0.0;
    for (double kappa : grid) {
        if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorCode::InvalidKappa, "kappa grid entries must lie in (0, 1)");
        lower = std::max(lower, transfer_delta(x, bx, y, kappa));
        lower = std::max(lower, transfer_delta(y, by, x, kappa));
    }
    return lower;
}

namespace {

bool orientation_swapped(const FiniteGDS& x, const FiniteGDS& y) {
    auto key = [](const FiniteGDS& z) {
        return std::make_tuple(z.num_points(), z.num_generators(), z.family().to_string(), z.mu().values(),
                               z.generators());
    };
    return key(y) < key(x);
}

// North-west corner rule along the given point orders: a transportation-polytope vertex.
CouplingMatrix northwest(const ProbVector& mx, const ProbVector& my, const std::vector<std::size_t>& ox,
                         const std::vector<std::size_t>& oy) {
    Matrix pi(mx.size(), Row(my.size(), 0.0));
    std::vector<double> rx(mx.values()), ry(my.values());
    std::size_t a = 0, b = 0;
    while (a < ox.size() && b < oy.size()) {
        std::size_t i = ox[a], j = oy[b];
        double t = std::min(rx[i], ry[j]);
        pi[i][j] += t;
        rx[i] -= t;
        ry[j] -= t;
        bool row_done = rx[i] <= 1e-15, col_done = ry[j] <= 1e-15;
        if (row_done) ++a;
        if (col_done) ++b;
    }
    return CouplingMatrix(std::move(pi), mx, my);
}

std::vector<std::size_t> order_by_feature(const FiniteGDS& z) {
    std::vector<std::size_t> o(z.num_points());
    std::iota(o.begin(), o.end(), 0);
    if (z.num_generators() > 0) {
        const Row& f = z.generator(0);
        std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    }
    return o;
}

// A mass-preserving bijection carrying one generator set exactly onto the other.
std::optional<CouplingMatrix> isomorphism_coupling(const FiniteGDS& x, const FiniteGDS& y) {
    const std::size_t n = x.num_points();
    if (n != y.num_points() || n > 6 || x.num_generators() != y.num_generators() || !(x.family() == y.family()))
        return std::nullopt;
    Matrix target = y.generators();
    std::sort(target.begin(), target.end());
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = std::abs(x.mu()[i] - y.mu()[perm[i]]) <= kMassGuard;
        if (!ok) continue;
        Matrix mapped(x.num_generators(), Row(n));
        for (std::size_t r = 0; r < x.num_generators(); ++r)
            for (std::size_t i = 0; i < n; ++i) mapped[r][perm[i]] = x.generator(r)[i];
        std::sort(mapped.begin(), mapped.end());
        if (mapped == target) {
            Matrix pi(n, Row(n, 0.0));
            for (std::size_t i = 0; i < n; ++i) pi[i][perm[i]] = x.mu()[i];
            return CouplingMatrix(std::move(pi), x.mu(), y.mu());
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

std::vector<std::pair<std::string, CouplingMatrix>> candidate_couplings(const FiniteGDS& x, const FiniteGDS& y,
                                                                        const SearchConfig& cfg) {
    std::vector<std::pair<std::string, CouplingMatrix>> out;
    const std::size_t nx = x.num_points(), ny = y.num_points();
    if (auto iso = isomorphism_coupling(x, y)) out.emplace_back("isomorphism", *iso);
    if (nx == ny) {
        bool same = true;
        for (std::size_t i = 0; i < nx && same; ++i) same = std::abs(x.mu()[i] - y.mu()[i]) <= cfg.tol;
        if (same) {
            Matrix pi(nx, Row(nx, 0.0));
            for (std::size_t i = 0; i < nx; ++i) pi[i][i] = x.mu()[i];
            // Absorb marginal round-off: columns of pi must equal mu_Y.
            for (std::size_t i = 0; i < nx; ++i) pi[i][i] = y.mu()[i];
            try {
                out.emplace_back("diagonal", CouplingMatrix(std::move(pi), x.mu(), y.mu(), cfg.tol));
            } catch (const Error&) {
            }
        }
    }
    out.emplace_back("product", CouplingMatrix::product(x.mu(), y.mu()));
    {
        auto ox = order_by_feature(x), oy = order_by_feature(y);
        out.emplace_back("greedy-monotone", northwest(x.mu(), y.mu(), ox, oy));
        std::reverse(oy.begin(), oy.end());
        out.emplace_back("greedy-antitone", northwest(x.mu(), y.mu(), ox, oy));
    }
    for (std::size_t c = 0; c < cfg.coupling_candidates; ++c) {
        std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ULL + c + 1);
        std::vector<std::size_t> ox(nx), oy(ny);
        std::iota(ox.begin(), ox.end(), 0);
        std::iota(oy.begin(), oy.end(), 0);
        std::shuffle(ox.begin(), ox.end(), rng);
        std::shuffle(oy.begin(), oy.end(), rng);
        out.emplace_back("random-vertex-" + std::to_string(c), northwest(x.mu(), y.mu(), ox, oy));
    }
    return out;
}

template <class Objective>
std::pair<double, CouplingMatrix> local_search(const FiniteGDS& x, const FiniteGDS& y, CouplingMatrix pi,
                                               double value, std::size_t budget, Objective objective) {
    const std::size_t nx = pi.rows(), ny = pi.cols();
    std::size_t used = 0;
    bool improved = true;
    while (improved && used < budget && value > 0.0) {
        improved = false;
        for (std::size_t i = 0; i < nx && !improved && used < budget; ++i)
            for (std::size_t j = 0; j < ny && !improved && used < budget; ++j) {
                if (pi(i, j) <= 0.0) continue;
                for (std::size_t k = i + 1; k < nx && !improved && used < budget; ++k)
                    for (std::size_t l = 0; l < ny && !improved && used < budget; ++l) {
                        if (l == j || pi(k, l) <= 0.0) continue;
                        Matrix m = pi.matrix();
                        double t = std::min(m[i][j], m[k][l]);
                        m[i][j] -= t;
                        m[k][l] -= t;
                        m[i][l] += t;
                        m[k][j] += t;
                        if (m[i][j] < 1e-15) m[i][j] = 0.0;
                        if (m[k][l] < 1e-15) m[k][l] = 0.0;
                        CouplingMatrix cand(std::move(m), x.mu(), y.mu(), 1e-9);
                        ++used;
                        double v = objective(cand);
                        if (v < value) {
                            value = v;
                            pi = std::move(cand);
                            improved = true;
                        }
                    }
            }
    }
    return {value, std::move(pi)};
}

Bracket dconc_bracket_oriented(const FiniteGDS& x, const FiniteGDS& y, const SearchConfig& cfg) {
    Bracket br;
    br.lower = dconc_lower_via_od(x, y, cfg.kappa_grid);
    br.lower_witness = "od transfer over kappa grid";
    br.upper = kInf;
    auto objective = [&](const CouplingMatrix& pi) { return dconc_pi(x, y, pi); };
    for (auto& [name, pi] : candidate_couplings(x, y, cfg)) {
        double v = objective(pi);
        if (v < br.upper) {
            br.upper = v;
            br.coupling = pi;
            br.upper_witness = name;
        }
        if (br.upper <= 0.0) break;
        auto [lv, lpi] = local_search(x, y, pi, v, cfg.local_search_steps, objective);
        if (lv < br.upper) {
            br.upper = lv;
            br.coupling = std::move(lpi);
            br.upper_witness = name + "+local-search";
        }
        if (br.upper <= br.lower) break;
    }
    br.upper = std::min(br.upper, 1.0);
    return br;
}

Bracket transpose_bracket(Bracket b) {
    if (b.coupling) b.coupling = b.coupling->transposed();
    for (auto& p : b.support) std::swap(p.first, p.second);
    std::sort(b.support.begin(), b.support.end());
    return b;
}

}  // namespace

Bracket dconc_bracket(const FiniteGDS& x, const FiniteGDS& y, const SearchConfig& config) {
    if (orientation_swapped(x, y)) return transpose_bracket(dconc_bracket_oriented(y, x, config));
    return dconc_bracket_oriented(x, y, config);
}

namespace {

struct SupTerm {
    double value = 0.0;
    std::vector<double> residual;  // per pair, under the witness maps
};

double apply_witness(const OrbitDistanceResult& r, double v) {
    return r.lip1_witness ? (*r.lip1_witness)(v) : r.witness(v);
}

// 2 * Hausdorff distance under the sup norm on the listed pairs, with per-pair residuals.
SupTerm sup_term(const FiniteGDS& x, const FiniteGDS& y, const std::vector<IndexPair>& s) {
    Pulled p = pull_back(x, y, s, nullptr);
    SupTerm out;
    out.residual.assign(s.size(), 0.0);
    auto directed = [&](const Matrix& fa, const Matrix& gb, const FamilyTag& fam_a, const FamilyTag& fam_b) {
        if (!fam_a.subset_of(fam_b)) {
            out.value = kInf;
            return;
        }
        for (const Row& f : fa) {
            OrbitDistanceResult best;
            best.value = kInf;
            std::size_t arg = 0;
            for (std::size_t g = 0; g < gb.size(); ++g) {
                OrbitDistanceResult r = sup_dist_to_orbit(f, gb[g], fam_b);
                if (r.value < best.value) {
                    best = r;
                    arg = g;
                }
            }
            if (gb.empty()) continue;
            out.value = std::max(out.value, 2.0 * best.value);
            for (std::size_t k = 0; k < s.size(); ++k)
                out.residual[k] = std::max(out.residual[k], std::abs(f[k] - apply_witness(best, gb[arg][k])));
        }
    };
    directed(p.fx, p.gy, x.family(), y.family());
    if (std::isfinite(out.value)) directed(p.gy, p.fx, y.family(), x.family());
    return out;
}

double complement_mass(const CouplingMatrix& pi, const std::vector<IndexPair>& s) {
    std::vector<std::vector<bool>> in(pi.rows(), std::vector<bool>(pi.cols(), false));
    for (const auto& [i, j] : s) in[i][j] = true;
    double m = 0.0;
    for (std::size_t i = 0; i < pi.rows(); ++i)
        for (std::size_t j = 0; j < pi.cols(); ++j)
            if (!in[i][j]) m += pi(i, j);
    return m;
}

}  // namespace

double box_objective(const FiniteGDS& x, const FiniteGDS& y, const CouplingMatrix& pi, const std::vector<IndexPair>& s) {
    if (s.empty()) throw Error(ErrorCode::EmptySupport, "support S must be nonempty");
    for (const auto& [i, j] : s)
        if (i >= x.num_points() || j >= y.num_points()) throw Error(ErrorCode::EmptySupport, "support index out of range");
    std::vector<IndexPair> uniq = s;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    return std::max(complement_mass(pi, uniq), sup_term(x, y, uniq).value);
}

namespace {

Bracket box_bracket_oriented(const FiniteGDS& x, const FiniteGDS& y, const SearchConfig& cfg) {
    Bracket dc = dconc_bracket_oriented(x, y, cfg);
    Bracket br;
    br.lower = dc.lower;
    br.lower_witness = dc.lower_witness + " (d_conc <= box)";
    br.upper = kInf;
    std::vector<std::pair<std::string, CouplingMatrix>> couplings = candidate_couplings(x, y, cfg);
    if (dc.coupling) couplings.emplace_back("dconc-" + dc.upper_witness, *dc.coupling);
    for (const auto& [name, pi] : couplings) {
        std::vector<IndexPair> s = support_of(pi);
        // Peel off the worst-fitting pair until a single pair remains.
        while (!s.empty()) {
            SupTerm t = sup_term(x, y, s);
            double v = std::max(complement_mass(pi, s), t.value);
            if (v < br.upper) {
                br.upper = v;
                br.coupling = pi;
                br.support = s;
                br.upper_witness = name + " support size " + std::to_string(s.size());
            }
            if (s.size() == 1) break;
            std::size_t worst = 0;
            for (std::size_t k = 1; k < s.size(); ++k)
                if (t.residual[k] > t.residual[worst]) worst = k;
            s.erase(s.begin() + static_cast<std::ptrdiff_t>(worst));
        }
        if (br.upper <= br.lower) break;
    }
    return br;
}

}  // namespace

Bracket box_bracket(const FiniteGDS& x, const FiniteGDS& y, const SearchConfig& config) {
    if (orientation_swapped(x, y)) return transpose_bracket(box_bracket_oriented(y, x, config));
    return box_bracket_oriented(x, y, config);
}

}  // namespace gds
