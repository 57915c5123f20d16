// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gds/gds.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gds;
using gds::testkit::Gen;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Check {
    int failures = 0;
    std::ostringstream first;
    void expect(bool ok, const std::string& what) {
        if (!ok && failures++ == 0) first << what;
    }
};

int g_failed = 0;

void report(const char* id, const char* title, const Check& c, const std::string& detail) {
    bool ok = c.failures == 0;
    if (!ok) ++g_failed;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << ' ' << title << " (" << detail;
    if (!ok) std::cout << "; " << c.failures << " violations, first: " << c.first.str();
    std::cout << ")\n";
}

std::string fmt(double v) { return format_double(v); }

FiniteGDS cube(std::size_t k) {
    SpaceRecipe r;
    r.kind = SpaceRecipe::Kind::HammingCube;
    r.k = k;
    r.normalize_by_k = true;
    return generate_space(r);
}

// P(lo <= S <= hi) for S ~ Binomial(k, 1/2), as a count out of 2^k.
double binomial_window(int k, int lo, int hi) {
    double c = 1.0, total = 0.0;
    for (int j = 0; j <= k; ++j) {
        if (j >= lo && j <= hi) total += c;
        c = c * (k - j) / (j + 1);
    }
    return total;
}

// od of the normalised cube from the binomial law: the narrowest window of
// Hamming weights carrying mass >= 1 - kappa.
double cube_od_oracle(int k, double kappa) {
    double best = 1.0;
    for (int lo = 0; lo <= k; ++lo)
        for (int hi = lo; hi <= k; ++hi)
            if (binomial_window(k, lo, hi) / std::ldexp(1.0, k) >= 1.0 - kappa - 1e-12)
                best = std::min(best, static_cast<double>(hi - lo) / k);
    return best;
}

Matrix random_cloud_metric(Gen& gen, std::size_t n, std::size_t dim) {
    std::vector<Row> pts(n, Row(dim));
    for (Row& p : pts)
        for (double& v : p) v = gen.real(0.0, 1.0);
    Matrix d(n, Row(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < dim; ++c) s += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
            d[i][j] = std::sqrt(s);
        }
    return d;
}

DiscreteMeasureR centred(const DiscreteMeasureR& mu) {
    double m = levy_mean(mu);
    std::vector<Atom> a;
    for (const Atom& at : mu.atoms) a.push_back({at.value - m, at.mass});
    return DiscreteMeasureR::from_atoms(a);
}

DiscreteMeasureR clipped(const DiscreteMeasureR& mu, double r) {
    std::vector<Atom> a;
    for (const Atom& at : mu.atoms) a.push_back({std::clamp(at.value, -r, r), at.mass});
    return DiscreteMeasureR::from_atoms(a);
}

void ac1() {
    auto t0 = Clock::now();
    Check c;
    int cases = 0;
    for (double n : {1.0, 2.0, 8.0}) {
        FiniteGDS x = testkit::two_point(n);
        for (double kappa : {0.1, 0.25, 0.4, 0.5, 0.7}) {
            double want = oracle::partial_diameter(pushforward(x.generator(0), x.mu()), 1.0 - kappa);
            double expected = kappa < 0.5 ? n : 0.0;
            double got = observable_diameter(x, kappa);
            ++cases;
            c.expect(got == expected && want == expected,
                     "n=" + fmt(n) + " kappa=" + fmt(kappa) + " od=" + fmt(got) + " oracle=" + fmt(want));
        }
    }
    double t = seconds_since(t0);
    c.expect(t < 1.0, "runtime " + fmt(t) + " s");
    report("AC1", "two-point observable diameter", c, std::to_string(cases) + " cases, " + fmt(t) + " s");
}

void ac2() {
    auto t0 = Clock::now();
    Check c;
    Gen gen(2002);
    for (int t = 0; t < 100; ++t) {
        std::size_t n = gen.index(1, 32);
        Matrix d;
        ProbVector mu(gen.weights(n));
        if (t % 2 == 0) {
            d = random_cloud_metric(gen, n, gen.index(1, 4));
        } else {
            FiniteGDS base = gen.gds(n, 4, FamilyTag::tb());
            d = induced_metric(base);
            mu = base.mu();
        }
        FiniteGDS x = embed_mm_space(d, mu, FamilyTag::tb());
        for (double kappa : {0.05, 0.1, 0.3, 0.5, 0.8}) {
            double a = observable_diameter_hss(d, mu, kappa), b = observable_diameter(x, kappa);
            c.expect(a == b, "instance " + std::to_string(t) + " kappa " + fmt(kappa) + ": " + fmt(a) + " vs " + fmt(b));
        }
    }
    FiniteGDS q = cube(8);
    double central = binomial_window(8, 2, 6);
    c.expect(central == 238.0 && central / 256.0 >= 0.9, "binomial window " + fmt(central));
    double via_hss = observable_diameter_hss(induced_metric(q), q.mu(), 0.1);
    double via_gds = observable_diameter(q, 0.1);
    c.expect(via_hss == 0.5 && via_gds == 0.5, "cube8 od " + fmt(via_hss) + " / " + fmt(via_gds));

    // Timing: best of several runs at n = 128 and n = 256.
    auto best_time = [&](std::size_t n) {
        Gen g(77 + n);
        Matrix d = random_cloud_metric(g, n, 3);
        ProbVector mu = ProbVector::uniform(n);
        double best = 1e300;
        for (int rep = 0; rep < 5; ++rep) {
            auto s = Clock::now();
            volatile double od = observable_diameter_hss(d, mu, 0.1);
            (void)od;
            best = std::min(best, seconds_since(s));
        }
        return best;
    };
    double t128 = best_time(128), t256 = best_time(256);
    double ratio = t256 / t128;
    c.expect(ratio >= 4.0 && ratio <= 16.0, "runtime ratio " + fmt(ratio));
    double t = seconds_since(t0);
    c.expect(t < 60.0, "runtime " + fmt(t) + " s");
    char buf[128];
    std::snprintf(buf, sizeof buf, "100 metrics x 5 kappas bit-exact, cube8 od 0.5, ratio 256/128 = %.2f, %.2f s", ratio, t);
    report("AC2", "HSS path agreement, cube anchor, cubic scaling", c, buf);
}

void ac3() {
    auto t0 = Clock::now();
    Check c;
    Gen gen(3003);
    std::size_t bridge_checks = 0, trunc_checks = 0, transfer_checks = 0;
    for (int t = 0; t < 200; ++t) {
        FiniteGDS x = gen.gds(8, 2, FamilyTag::tb());
        FiniteGDS y = gen.gds(8, 2, FamilyTag::tb());
        const std::string tag = "pair " + std::to_string(t);

        // (a) triangle inequality and pullback contraction on X
        const std::size_t n = x.num_points();
        Row f = x.generator(0), g = gen.row(n), h = gen.row(n);
        double fg = ky_fan(f, g, x.mu()), gh = ky_fan(g, h, x.mu()), fh = ky_fan(f, h, x.mu());
        c.expect(fh <= fg + gh + 1e-12, tag + " triangle " + fmt(fh) + " > " + fmt(fg + gh));
        double l = gen.lattice(-12, 4);
        ClipMap p{gen.lattice(-8, 8), l, l + gen.lattice(0, 16)};
        double pulled = ky_fan(clip_apply(p, f), clip_apply(p, g), x.mu());
        c.expect(pulled <= fg, tag + " pullback " + fmt(pulled) + " > " + fmt(fg));

        // (b) Prohorov bridge between the two first-generator laws
        DiscreteMeasureR mu = pushforward(x.generator(0), x.mu());
        DiscreteMeasureR nu = pushforward(y.generator(0), y.mu());
        double dp = prohorov(mu, nu);
        for (double kappa : {0.05, 0.2, 0.35, 0.5, 0.65})
            for (int e = 1; e <= 64; ++e) {
                double eps = e / 64.0;
                if (eps <= dp || kappa + eps >= 1.0) continue;
                ++bridge_checks;
                double lhs = partial_diameter(mu, 1.0 - (kappa + eps));
                double rhs = partial_diameter(nu, 1.0 - kappa) + 2 * eps;
                c.expect(lhs <= rhs, tag + " bridge kappa " + fmt(kappa) + " eps " + fmt(eps));
            }

        // (c) truncation at zero Levy mean
        DiscreteMeasureR m0 = centred(mu);
        for (double kappa : {0.1, 0.3, 0.45})
            for (double r : {0.5, 1.0, 2.0, 4.0, 8.0}) {
                double pc = partial_diameter(clipped(m0, r), 1.0 - kappa);
                if (!(pc < r)) continue;
                ++trunc_checks;
                c.expect(partial_diameter(m0, 1.0 - kappa) == pc, tag + " truncation R " + fmt(r));
            }

        // (d) od transfer through the coupling upper bound
        double delta = dconc_bracket(x, y).upper + 1e-9;
        for (double kappa : default_kappa_grid()) {
            transfer_checks += 2;
            c.expect(observable_diameter_ext(x, kappa + delta) <= observable_diameter(y, kappa) + 2 * delta,
                     tag + " transfer X<-Y kappa " + fmt(kappa));
            c.expect(observable_diameter_ext(y, kappa + delta) <= observable_diameter(x, kappa) + 2 * delta,
                     tag + " transfer Y<-X kappa " + fmt(kappa));
        }
    }
    double t = seconds_since(t0);
    c.expect(t < 120.0, "runtime " + fmt(t) + " s");
    std::ostringstream d;
    d << "200 pairs; " << bridge_checks << " bridge, " << trunc_checks << " truncation, " << transfer_checks
      << " transfer checks; " << fmt(std::round(t * 100) / 100) << " s";
    c.expect(trunc_checks > 0 && bridge_checks > 0, "no applicable checks");
    report("AC3", "inequality suite", c, d.str());
}

void ac4() {
    Check c;
    FiniteGDS x1 = testkit::two_point(1), x2 = testkit::two_point(2);
    Bracket dc = dconc_bracket(x1, x2), bx = box_bracket(x1, x2);
    c.expect(std::abs(dc.lower - 0.49) <= 1e-12 && dc.upper == 0.5,
             "dconc [" + fmt(dc.lower) + ", " + fmt(dc.upper) + "]");
    c.expect(std::abs(bx.lower - 0.49) <= 1e-12 && bx.upper == 0.5, "box [" + fmt(bx.lower) + ", " + fmt(bx.upper) + "]");
    Gen gen(4004);
    for (int t = 0; t < 100; ++t) {
        FiniteGDS x = gen.gds(5, 3, FamilyTag::tb());
        FiniteGDS y = gen.gds(5, 3, FamilyTag::tb());
        std::size_t n = gen.index(1, x.num_generators()), m = gen.index(1, y.num_generators());
        FiniteGDS mx = enumerate_measurements(x, n, static_cast<double>(n), 64, t).members.front();
        FiniteGDS my = enumerate_measurements(y, m, static_cast<double>(m), 64, t).members.front();
        Bracket d = dconc_bracket(mx, my), b = box_bracket(mx, my);
        const std::string tag = "pair " + std::to_string(t);
        c.expect(d.lower <= d.upper, tag + " dconc lower > upper");
        c.expect(b.lower <= b.upper, tag + " box lower > upper");
        double factor = static_cast<double>(mx.num_generators() + my.num_generators());
        c.expect(b.lower <= factor * d.upper, tag + " box lower above (N+M) dconc upper");
    }
    report("AC4", "bracket certification", c,
           "dconc [" + fmt(dc.lower) + ", " + fmt(dc.upper) + "], box [" + fmt(bx.lower) + ", " + fmt(bx.upper) +
               "], 100 measurement pairs");
}

void ac5() {
    Check c;
    FiniteGDS pt = make_gds({{0.0}, {1.5}, {-4.0}, {7.25}}, FamilyTag::translations());
    for (double eps : {0.01, 0.1, 1.0}) {
        CoveringResult r = covering_number(pt, eps);
        c.expect(r.value == 1 && r.exact, "constants cov at eps " + fmt(eps) + " = " + std::to_string(r.value));
    }
    Gen gen(5005);
    int instances = 0;
    for (int t = 0; t < 60; ++t) {
        FamilyTag fam = t % 3 == 0 ? FamilyTag::translations() : (t % 3 == 1 ? FamilyTag::bounds() : FamilyTag::tb());
        FiniteGDS x = gen.gds(5, 6, fam);
        for (double eps : {0.05, 0.15, 0.3, 0.6}) {
            CoveringResult cov = covering_number(x, eps + 1e-9);
            CapacityResult cap = capacity(x, eps);
            if (!cov.exact || !cap.exact) continue;
            ++instances;
            c.expect(cov.value <= cap.value, "instance " + std::to_string(t) + " eps " + fmt(eps) + ": cov " +
                                                 std::to_string(cov.value) + " > capa " + std::to_string(cap.value));
        }
    }
    report("AC5", "covering number and capacity", c,
           "constants cov = 1 at 3 radii, " + std::to_string(instances) + " exhaustive cov <= capa checks");
}

void ac6() {
    Check c;
    Gen gen(6006);
    int n = 0;
    while (n < 500) {
        DiscreteMeasureR mu = gen.measure(10);
        double kappa = gen.real(1e-3, 0.499);
        double eps = gen.real(1e-3, 0.499);
        if (!(kappa + eps < 0.5)) continue;
        double r = gen.real(0.05, 8.0);
        ++n;
        ExtractionResult e = extract_bounded(mu, kappa, eps, r);
        std::vector<Atom> img;
        bool bounded = true;
        for (const Atom& a : mu.atoms) {
            double v = e.g(a.value);
            bounded = bounded && std::abs(v) <= r;
            img.push_back({v, a.mass});
        }
        double pd = partial_diameter(DiscreteMeasureR::from_atoms(img), 1.0 - kappa);
        double lhs = std::min(r, partial_diameter(mu, 1.0 - (kappa + eps)));
        c.expect(bounded, "measure " + std::to_string(n) + " leaves [-r, r]");
        c.expect(lhs <= pd + 2 * eps, "measure " + std::to_string(n) + ": " + fmt(lhs) + " > " + fmt(pd + 2 * eps));
    }
    report("AC6", "extractor guarantee", c, "500 measures");
}

void ac7() {
    auto t0 = Clock::now();
    Check c;
    for (std::size_t n = 1; n <= 50; ++n) {
        double closed = 1.0 / (2.0 * static_cast<double>(n) * std::ldexp(1.0, static_cast<int>(n)));
        c.expect(std::abs(series_weight(n) - closed) <= 1e-15, "weight " + std::to_string(n));
    }
    for (std::size_t levels = 0; levels <= 30; ++levels) {
        double partial = 0.0;
        for (std::size_t n = 1; n <= levels; ++n) partial += 1.0 / (2.0 * static_cast<double>(n) * std::ldexp(1.0, static_cast<int>(n)));
        double closed = std::numbers::ln2 / 2.0 - partial;
        c.expect(std::abs(tail_bound(levels) - closed) <= 1e-15, "tail " + std::to_string(levels));
    }
    Gen gen(7007);
    for (int t = 0; t < 20; ++t) {
        FiniteGDS x = gen.gds(5, 3, FamilyTag::tb());
        SeriesBracket s = staircase_distance(x, x, 3);
        c.expect(s.interval[0] <= 0.0 && s.interval[1] >= 0.0, "self interval misses 0");
        c.expect(s.interval[1] - s.interval[0] <= s.tail_bound + 1e-15, "self interval wider than tail");
    }
    for (int t = 0; t < 50; ++t) {
        FiniteGDS x = gen.gds(4, 3, FamilyTag::tb());
        FiniteGDS y = gen.gds(4, 3, FamilyTag::tb());
        SeriesBracket s = staircase_distance(x, y, 3);
        SeriesBracket r = rho_estimate(x, y, 3);
        double dc = dconc_bracket(x, y).upper;
        c.expect(s.interval[1] <= dc + s.tail_bound,
                 "pair " + std::to_string(t) + ": " + fmt(s.interval[1]) + " > " + fmt(dc + s.tail_bound));
        c.expect(r.interval[1] <= dc + r.tail_bound, "rho pair " + std::to_string(t));
    }
    int coherent = 0;
    while (coherent < 20) {
        FiniteGDS x = gen.gds(4, 3, FamilyTag::tb());
        if (x.num_generators() != 3) continue;
        ++coherent;
        c.expect(measurement_levels_coherent(x, 1, 2) && measurement_levels_coherent(x, 2, 3) &&
                     measurement_levels_coherent(x, 1, 3),
                 "coherence instance " + std::to_string(coherent));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "weights/tail to 1e-15, 20 self pairs, 50 transfer pairs, 20 coherence instances, %.2f s",
                  seconds_since(t0));
    report("AC7", "staircase and pyramid series", c, buf);
}

std::string strip_last_column(const std::string& csv) {
    std::istringstream in(csv);
    std::string out;
    for (std::string line; std::getline(in, line);) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
}

void ac8() {
    Check c;
    std::vector<SpaceRecipe> recipes;
    for (std::size_t k : {2u, 4u, 6u, 8u}) {
        SpaceRecipe r;
        r.kind = SpaceRecipe::Kind::HammingCube;
        r.k = k;
        r.normalize_by_k = true;
        recipes.push_back(r);
    }
    std::vector<SweepRow> rows = sweep(recipes, {0.1}, 1);
    c.expect(rows.size() == 4, "row count");
    std::string ods;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ods += (i ? "," : "") + fmt(rows[i].od);
        double want = cube_od_oracle(static_cast<int>(rows[i].param), 0.1);
        c.expect(std::abs(rows[i].od - want) <= 1e-12,"k=" + fmt(rows[i].param) + " od " + fmt(rows[i].od) + " oracle " + fmt(want));
        if (i) c.expect(rows[i].od <= rows[i - 1].od, "not nonincreasing at k=" + fmt(rows[i].param));
    }
    c.expect(rows.front().od == 1.0 && rows.back().od == 0.5, "endpoints");
    std::string a = strip_last_column(sweep_csv(sweep(recipes, {0.1}, 1)));
    std::string b = strip_last_column(sweep_csv(sweep(recipes, {0.1}, 4)));
    c.expect(a == b, "CSV differs between runs");
    report("AC8", "concentration sweep over normalised cubes", c, "od = [" + ods + "], CSV reproducible");
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> criteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8};
    for (const auto& run : criteria) {
        try {
            run();
        } catch (const std::exception& e) {
            ++g_failed;
            std::cout << "[FAIL] criterion aborted: " << e.what() << "\n";
        }
    }
    std::cout << (g_failed ? "acceptance: " + std::to_string(g_failed) + " criteria failed" : std::string("acceptance: all criteria passed"))
              << "\n";
    return g_failed ? 1 : 0;
}
