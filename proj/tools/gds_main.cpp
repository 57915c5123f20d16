// gds: command line front end for the geometric data set library.
//
// Exit codes: 0 success, 2 schema/validation error, 3 computational error,
// 4 domination search ran out of budget with an Unknown verdict.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "gds/gds.hpp"

namespace {

using namespace gds;

constexpr int kExitValidation = 2;
constexpr int kExitComputation = 3;
constexpr int kExitUnknown = 4;

struct Globals {
    std::string family;
    std::optional<double> kappa;
    std::string kappa_grid;
    std::uint64_t seed = 1;
    std::size_t budget = 0;  // 0: command default
    double tol = kDefaultTol;
    std::string out;
    std::optional<int> round_values;
};

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::SchemaError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Inline JSON when the argument looks like an object or array, a file otherwise.
std::string text_or_file(const std::string& arg) {
    auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return arg;
    return slurp(arg);
}

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(g.out, std::ios::binary);
    if (!os) throw Error(ErrorCode::SchemaError, "cannot write '" + g.out + "'");
    os << text;
    if (!text.empty() && text.back() != '\n') os << '\n';
}

FiniteGDS load(const Globals& g, const std::string& path) {
    FiniteGDS x = parse_gds(slurp(path));
    if (!g.family.empty()) x = x.with_family(FamilyTag::parse(g.family));
    return x;
}

double round_to(double v, int digits) {
    double scale = std::pow(10.0, digits);
    return std::round(v * scale) / scale;
}

Row maybe_rounded(const Globals& g, Row f) {
    if (g.round_values)
        for (double& v : f) v = round_to(v, *g.round_values);
    return f;
}

std::vector<double> kappas(const Globals& g, std::vector<double> fallback) {
    if (!g.kappa_grid.empty()) return parse_kappa_grid(g.kappa_grid);
    if (g.kappa) {
        if (!(*g.kappa > 0.0 && *g.kappa < 1.0)) throw Error(ErrorCode::InvalidKappa, "--kappa must lie in (0, 1)");
        return {*g.kappa};
    }
    return fallback;
}

SearchConfig search_config(const Globals& g) {
    SearchConfig c;
    c.seed = g.seed;
    c.tol = g.tol;
    if (g.budget) c.coupling_candidates = g.budget;
    if (!g.kappa_grid.empty()) c.kappa_grid = parse_kappa_grid(g.kappa_grid);
    return c;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) {
        try {
            std::size_t used = 0;
            unsigned long v = std::stoul(p, &used);
            if (used != p.size()) throw std::invalid_argument(p);
            out.push_back(v);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidSpec, "cannot parse feature index '" + p + "'");
        }
    }
    return out;
}

std::string csv_line(std::initializer_list<std::string> cells) {
    std::string s;
    for (const std::string& c : cells) {
        if (!s.empty()) s += ',';
        s += c;
    }
    return s + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric data sets: concentration, orbit distances, couplings, staircases"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--family", g.family, "Override the family: id, T, B, TB or lip1:<budget>");
    app.add_option("--kappa", g.kappa, "Single kappa in (0, 1)");
    app.add_option("--kappa-grid", g.kappa_grid, "Kappa grid a:b:step or a comma list");
    app.add_option("--seed", g.seed, "Seed for sampled searches")->capture_default_str();
    app.add_option("--budget", g.budget, "Search budget (command specific; 0 keeps the default)");
    app.add_option("--tol", g.tol, "Tolerance used by metric checks, couplings and domination")->capture_default_str();
    app.add_option("--out", g.out, "Output file (default: stdout)");
    app.add_option("--round-values", g.round_values, "Round feature values to this many decimals before quotienting");

    std::string in1, in2;
    int exit_code = 0;

    auto* validate = app.add_subcommand("validate", "Check a data set file and print a summary");
    validate->add_option("data", in1, "Data set JSON")->required();
    validate->callback([&] {
        FiniteGDS x = load(g, in1);
        check_metric(induced_metric(x), g.tol);
        nlohmann::json j{{"valid", true},
                         {"points", x.num_points()},
                         {"generators", x.num_generators()},
                         {"family", x.family().to_string()}};
        emit(g, j.dump());
    });

    std::string recipe;
    auto* gen = app.add_subcommand("gen", "Generate a standard space from a recipe");
    gen->add_option("recipe", recipe, "Recipe JSON (inline or file)")->required();
    gen->callback([&] {
        auto rs = parse_recipes(text_or_file(recipe));
        if (rs.size() != 1) throw Error(ErrorCode::SchemaError, "/: gen takes exactly one recipe");
        if (!g.family.empty()) rs[0].family = FamilyTag::parse(g.family);
        emit(g, serialize_gds(generate_space(rs[0])));
    });

    auto* odiam = app.add_subcommand("odiam", "Observable diameter as kappa,od CSV");
    odiam->add_option("data", in1, "Data set JSON")->required();
    odiam->callback([&] {
        FiniteGDS x = load(g, in1);
        std::vector<double> ks = kappas(g, {0.1});
        std::vector<double> od = ks.size() > 1 ? od_profile(x, ks) : std::vector<double>{observable_diameter(x, ks[0])};
        std::string s = "kappa,od\n";
        for (std::size_t i = 0; i < ks.size(); ++i) s += csv_line({format_double(ks[i]), format_double(od[i])});
        emit(g, s);
    });

    double alpha = 0.5;
    auto* pdiam = app.add_subcommand("pdiam", "Partial diameter of a measure");
    pdiam->add_option("measure", in1, "Measure JSON {\"atoms\": [[value, mass], ...]}")->required();
    pdiam->add_option("--alpha", alpha, "Mass level in (0, 1]")->capture_default_str();
    pdiam->callback([&] { emit(g, format_double(partial_diameter(parse_measure(slurp(in1)), alpha))); });

    std::size_t fi = 0, gi = 1;
    bool orbit = false;
    auto* kyfan = app.add_subcommand("kyfan", "Ky Fan distance between two generators (or to an orbit)");
    kyfan->add_option("data", in1, "Data set JSON")->required();
    kyfan->add_option("--f", fi, "Index of the first generator")->capture_default_str();
    kyfan->add_option("--g", gi, "Index of the second generator")->capture_default_str();
    kyfan->add_flag("--orbit", orbit, "Distance from f to the family orbit of g");
    kyfan->callback([&] {
        FiniteGDS x = load(g, in1);
        if (fi >= x.num_generators() || gi >= x.num_generators())
            throw Error(ErrorCode::InvalidSpec, "generator index out of range");
        if (!orbit) {
            emit(g, format_double(ky_fan(x.generator(fi), x.generator(gi), x.mu())));
            return;
        }
        OrbitDistanceResult r = dist_to_orbit(x.generator(fi), x.generator(gi), x.family(), x.mu(), g.tol, g.seed);
        nlohmann::json j{{"value", r.value},
                         {"witness", nlohmann::json::parse(serialize_clip_map(r.witness))},
                         {"certified", r.certified}};
        if (r.lip1_witness) j["lip1_witness"] = {{"knots", r.lip1_witness->knots}, {"values", r.lip1_witness->values}};
        emit(g, j.dump());
    });

    auto* proh = app.add_subcommand("prohorov", "Prohorov distance between two measures");
    proh->add_option("mu", in1, "Measure JSON")->required();
    proh->add_option("nu", in2, "Measure JSON")->required();
    proh->callback([&] { emit(g, format_double(prohorov(parse_measure(slurp(in1)), parse_measure(slurp(in2))))); });

    std::string features;
    auto* quot = app.add_subcommand("quotient", "Quotient by a subset of the generators");
    quot->add_option("data", in1, "Data set JSON")->required();
    quot->add_option("--features", features, "Comma separated generator indices")->required();
    quot->callback([&] {
        FiniteGDS x = load(g, in1);
        Matrix rows;
        for (std::size_t i : parse_index_list(features)) {
            if (i >= x.num_generators()) throw Error(ErrorCode::InvalidSpec, "feature index out of range");
            rows.push_back(maybe_rounded(g, x.generator(i)));
        }
        emit(g, serialize_gds(quotient(x, rows).space));
    });

    std::string spec_arg;
    auto* meas = app.add_subcommand("measure", "(N, R)-measurement of a data set");
    meas->add_option("data", in1, "Data set JSON")->required();
    meas->add_option("--spec", spec_arg, "Measurement spec JSON {\"features\": [...], \"R\": r} (inline or file)")
        ->required();
    meas->callback([&] {
        FiniteGDS x = load(g, in1);
        MeasurementSpec spec = parse_measurement_spec(text_or_file(spec_arg));
        if (!g.round_values) {
            emit(g, serialize_gds(measurement(x, spec)));
            return;
        }
        validate_spec(x, spec);
        Matrix rows;
        for (std::size_t i : spec.features)
            rows.push_back(clip_apply(ClipMap::bound(spec.R), maybe_rounded(g, x.generator(i))));
        emit(g, serialize_gds(quotient(x, rows).space));
    });

    double eps = 0.1;
    auto* cov = app.add_subcommand("covnum", "Covering number and capacity of the generator family");
    cov->add_option("data", in1, "Data set JSON")->required();
    cov->add_option("--eps", eps, "Radius")->capture_default_str();
    cov->callback([&] {
        if (!(eps > 0.0)) throw Error(ErrorCode::InvalidRange, "--eps must be positive");
        FiniteGDS x = load(g, in1);
        CoveringResult c = covering_number(x, eps);
        CapacityResult k = capacity(x, eps);
        nlohmann::json j{{"eps", eps},
                         {"covering_number", c.value},
                         {"exact", c.exact},
                         {"distances_certified", c.distances_certified},
                         {"centers", c.centers},
                         {"capacity", k.value},
                         {"capacity_exact", k.exact}};
        emit(g, j.dump());
    });

    auto* dconc = app.add_subcommand("dconc", "Bracket for the observable distance");
    dconc->add_option("x", in1, "Data set JSON")->required();
    dconc->add_option("y", in2, "Data set JSON")->required();
    dconc->callback([&] { emit(g, serialize_bracket(dconc_bracket(load(g, in1), load(g, in2), search_config(g)))); });

    auto* box = app.add_subcommand("box", "Bracket for the box distance");
    box->add_option("x", in1, "Data set JSON")->required();
    box->add_option("y", in2, "Data set JSON")->required();
    box->callback([&] { emit(g, serialize_bracket(box_bracket(load(g, in1), load(g, in2), search_config(g)))); });

    std::size_t levels = 3;
    auto series_cmd = [&](const char* name, const char* help, bool rho) {
        auto* c = app.add_subcommand(name, help);
        c->add_option("x", in1, "Data set JSON")->required();
        c->add_option("y", in2, "Data set JSON")->required();
        c->add_option("--levels", levels, "Truncation level L")->capture_default_str();
        c->callback([&, rho] {
            if (levels == 0) throw Error(ErrorCode::InvalidRange, "--levels must be positive");
            StaircaseConfig cfg;
            cfg.search = search_config(g);
            cfg.seed = g.seed;
            if (g.budget) cfg.budget = g.budget;
            FiniteGDS x = load(g, in1), y = load(g, in2);
            SeriesBracket s = rho ? rho_estimate(x, y, levels, cfg) : staircase_distance(x, y, levels, cfg);
            emit(g, serialize_series(s));
        });
    };
    series_cmd("staircase", "Truncated staircase distance", false);
    series_cmd("rho", "Truncated pyramid distance", true);

    auto* dom = app.add_subcommand("domination", "Decide whether y is dominated by x");
    dom->add_option("x", in1, "Data set JSON")->required();
    dom->add_option("y", in2, "Data set JSON")->required();
    dom->callback([&] {
        DominationVerdict v = check_domination(load(g, in1), load(g, in2), g.tol, g.budget ? g.budget : 100000);
        emit(g, serialize_verdict(v));
        if (v.status == DominationVerdict::Status::Unknown) exit_code = kExitUnknown;
    });

    std::size_t threads = 0;
    bool no_runtime = false;
    auto* sw = app.add_subcommand("sweep", "Observable diameter sweep over recipes, as CSV");
    sw->add_option("recipes", recipe, "Recipe list JSON (inline or file)")->required();
    sw->add_option("--threads", threads, "Worker threads (0: hardware)")->capture_default_str();
    sw->add_flag("--no-runtime", no_runtime, "Omit the runtime_ms column");
    sw->callback([&] {
        auto rs = parse_recipes(text_or_file(recipe));
        if (!g.family.empty())
            for (SpaceRecipe& r : rs) r.family = FamilyTag::parse(g.family);
        emit(g, sweep_csv(sweep(rs, kappas(g, {0.1}), threads), !no_runtime));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_validation_error(e.code()) ? kExitValidation : kExitComputation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return exit_code;
}
