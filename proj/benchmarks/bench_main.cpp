#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "gds/gds.hpp"

namespace {

gds::Matrix cloud_metric(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::array<double, 3>> p(n);
    for (auto& q : p)
        for (double& v : q) v = u(rng);
    gds::Matrix d(n, gds::Row(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += (p[i][c] - p[j][c]) * (p[i][c] - p[j][c]);
            d[i][j] = std::sqrt(s);
        }
    return d;
}

gds::Row random_row(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    gds::Row r(n);
    for (double& v : r) v = u(rng);
    return r;
}

void BM_ObservableDiameterHSS(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    gds::Matrix d = cloud_metric(n, 11);
    gds::ProbVector mu = gds::ProbVector::uniform(n);
    for (auto _ : state) benchmark::DoNotOptimize(gds::observable_diameter_hss(d, mu, 0.1));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ObservableDiameterHSS)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_DistToOrbit(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(5);
    gds::Row f = random_row(n, rng), g = random_row(n, rng);
    gds::ProbVector mu = gds::ProbVector::uniform(n);
    const gds::FamilyTag fam = state.range(1) == 0 ? gds::FamilyTag::translations() : gds::FamilyTag::tb();
    for (auto _ : state) benchmark::DoNotOptimize(gds::dist_to_orbit(f, g, fam, mu));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DistToOrbit)->ArgsProduct({{8, 32, 128}, {0, 1}});

void BM_DconcBracket(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(9);
    auto make = [&] {
        std::vector<gds::Row> gens{random_row(n, rng), random_row(n, rng)};
        return gds::make_gds(gens, gds::FamilyTag::tb());
    };
    gds::FiniteGDS x = make(), y = make();
    for (auto _ : state) benchmark::DoNotOptimize(gds::dconc_bracket(x, y));
}
BENCHMARK(BM_DconcBracket)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
