#include "gds/io.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "gds/errors.hpp"
#include "gds/obs_diam.hpp"

namespace gds {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& pointer, const std::string& what) {
    throw Error(ErrorCode::SchemaError, pointer + ": " + what);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        schema("", std::string("invalid JSON (") + e.what() + ")");
    }
}

const json& require(const json& obj, const std::string& key, const std::string& base = "") {
    if (!obj.is_object()) schema(base.empty() ? "/" : base, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema(base + "/" + key, "missing");
    return *it;
}

double number_at(const json& v, const std::string& pointer) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
        if (s == "-inf" || s == "-Infinity") return -std::numeric_limits<double>::infinity();
    }
    schema(pointer, "expected a number");
}

json number_json(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

std::vector<double> number_list(const json& v, const std::string& pointer) {
    if (!v.is_array()) schema(pointer, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number_at(v[i], pointer + "/" + std::to_string(i)));
    return out;
}

Matrix number_matrix(const json& v, const std::string& pointer) {
    if (!v.is_array()) schema(pointer, "expected an array of rows");
    Matrix out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number_list(v[i], pointer + "/" + std::to_string(i)));
    return out;
}

std::vector<std::string> point_list(const json& v) {
    if (!v.is_array()) schema("/points", "expected an array");
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_string())
            ids.push_back(v[i].get<std::string>());
        else if (v[i].is_number() || v[i].is_boolean())
            ids.push_back(v[i].dump());
        else
            schema("/points/" + std::to_string(i), "expected a string or number label");
    }
    return ids;
}

FamilyTag family_of(const json& doc) {
    if (!doc.contains("family")) return FamilyTag::tb();
    const json& f = doc["family"];
    if (!f.is_string()) schema("/family", "expected a string");
    try {
        return FamilyTag::parse(f.get<std::string>());
    } catch (const Error&) {
        schema("/family", "unknown family '" + f.get<std::string>() + "'");
    }
}

void check_row_lengths(const Matrix& rows, std::size_t n, const std::string& pointer) {
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].size() != n)
            throw Error(ErrorCode::DimensionMismatch,
                        pointer + "/" + std::to_string(r) + ": expected " + std::to_string(n) + " entries");
}

}  // namespace

FiniteGDS parse_gds(std::string_view text) {
    json doc = parse_json(text);
    if (!doc.is_object()) schema("/", "expected an object");
    std::vector<std::string> ids = point_list(require(doc, "points"));
    std::vector<double> weights = number_list(require(doc, "weights"), "/weights");
    FamilyTag family = family_of(doc);
    if (doc.contains("distance_matrix")) {
        Matrix d = number_matrix(doc["distance_matrix"], "/distance_matrix");
        if (d.size() != ids.size())
            throw Error(ErrorCode::DimensionMismatch, "/distance_matrix: expected " + std::to_string(ids.size()) + " rows");
        check_row_lengths(d, ids.size(), "/distance_matrix");
        if (weights.size() != ids.size())
            throw Error(ErrorCode::DimensionMismatch, "/weights: expected " + std::to_string(ids.size()) + " entries");
        FiniteGDS x = embed_mm_space(d, ProbVector(weights), family);
        return validate_gds(std::move(ids), x.generators(), family, std::move(weights));
    }
    const json& features = require(doc, "features");
    Matrix gens = number_matrix(require(features, "generators", "/features"), "/features/generators");
    check_row_lengths(gens, ids.size(), "/features/generators");
    return validate_gds(std::move(ids), std::move(gens), family, std::move(weights));
}

std::string serialize_gds(const FiniteGDS& x) {
    json doc;
    doc["points"] = x.point_ids();
    doc["weights"] = x.mu().values();
    doc["family"] = x.family().to_string();
    doc["features"]["generators"] = x.generators();
    return doc.dump();
}

Matrix parse_distance_matrix(std::string_view text) {
    json doc = parse_json(text);
    if (doc.is_object() && doc.contains("distance_matrix")) {
        Matrix d = number_matrix(doc["distance_matrix"], "/distance_matrix");
        return d;
    }
    return induced_metric(parse_gds(text));
}

DiscreteMeasureR parse_measure(std::string_view text) {
    json doc = parse_json(text);
    const json& atoms = require(doc, "atoms");
    if (!atoms.is_array()) schema("/atoms", "expected an array of [value, mass] pairs");
    std::vector<Atom> out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        std::string p = "/atoms/" + std::to_string(i);
        if (!atoms[i].is_array() || atoms[i].size() != 2) schema(p, "expected [value, mass]");
        out.push_back({number_at(atoms[i][0], p + "/0"), number_at(atoms[i][1], p + "/1")});
    }
    return DiscreteMeasureR::from_atoms(std::move(out));
}

std::string serialize_measure(const DiscreteMeasureR& m) {
    json atoms = json::array();
    for (const Atom& a : m.atoms) atoms.push_back({a.value, a.mass});
    return json{{"atoms", atoms}}.dump();
}

ClipMap parse_clip_map(std::string_view text) {
    json doc = parse_json(text);
    double c = number_at(require(doc, "c"), "/c");
    double l = number_at(require(doc, "l"), "/l");
    double u = number_at(require(doc, "u"), "/u");
    return ClipMap::make(c, l, u);
}

std::string serialize_clip_map(const ClipMap& p) {
    return json{{"c", number_json(p.c)}, {"l", number_json(p.l)}, {"u", number_json(p.u)}}.dump();
}

MeasurementSpec parse_measurement_spec(std::string_view text) {
    json doc = parse_json(text);
    const json& f = require(doc, "features");
    if (!f.is_array()) schema("/features", "expected an array of indices");
    MeasurementSpec s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f[i].is_number_unsigned()) schema("/features/" + std::to_string(i), "expected a nonnegative integer");
        s.features.push_back(f[i].get<std::size_t>());
    }
    s.R = number_at(require(doc, "R"), "/R");
    return s;
}

std::string serialize_measurement_spec(const MeasurementSpec& s) {
    return json{{"features", s.features}, {"R", number_json(s.R)}}.dump();
}

std::string serialize_bracket(const Bracket& b) {
    json doc{{"lower", number_json(b.lower)},
             {"upper", number_json(b.upper)},
             {"lower_witness", b.lower_witness},
             {"upper_witness", b.upper_witness}};
    if (b.coupling) doc["coupling"] = b.coupling->matrix();
    if (!b.support.empty()) {
        json s = json::array();
        for (const auto& [i, j] : b.support) s.push_back({i, j});
        doc["support"] = s;
    }
    return doc.dump();
}

std::string serialize_series(const SeriesBracket& s) {
    json levels = json::array();
    for (const LevelHausdorff& h : s.per_level)
        levels.push_back({{"lower", number_json(h.lower)}, {"upper", number_json(h.upper)}, {"estimate", h.estimate}});
    return json{{"partial", number_json(s.partial)},
                {"tail_bound", number_json(s.tail_bound)},
                {"levels", s.levels},
                {"interval", {number_json(s.interval[0]), number_json(s.interval[1])}},
                {"estimate", s.estimate},
                {"per_level", levels}}
        .dump();
}

std::string serialize_verdict(const DominationVerdict& v) {
    json doc{{"status", status_name(v.status)},
             {"certificate", v.certificate},
             {"maps_examined", v.maps_examined},
             {"exhaustive", v.exhaustive},
             {"certified", v.certified}};
    if (v.status == DominationVerdict::Status::Dominates) doc["witness_map"] = v.witness_map;
    return doc.dump();
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string SpaceRecipe::id() const {
    switch (kind) {
        case Kind::TwoPoint: return "two_point";
        case Kind::HammingCube: return normalize_by_k ? "hamming_cube_by_k" : "hamming_cube";
        case Kind::Path: return "path";
        case Kind::RandomCloud: return l2 ? "random_cloud_l2" : "random_cloud_linf";
        case Kind::FromFile: return "from_file:" + path;
    }
    return "?";
}

double SpaceRecipe::param() const {
    switch (kind) {
        case Kind::TwoPoint: return d;
        case Kind::HammingCube: return static_cast<double>(k);
        case Kind::Path:
        case Kind::RandomCloud: return static_cast<double>(n);
        case Kind::FromFile: return 0.0;
    }
    return 0.0;
}

namespace {

SpaceRecipe recipe_from_json(const json& r, const std::string& base) {
    SpaceRecipe out;
    std::string kind;
    {
        const json& k = require(r, "kind", base);
        if (!k.is_string()) schema(base + "/kind", "expected a string");
        kind = k.get<std::string>();
    }
    auto num = [&](const char* key) { return number_at(require(r, key, base), base + "/" + key); };
    auto count = [&](const char* key) {
        double v = num(key);
        if (!(v >= 1.0) || v != std::floor(v)) schema(base + "/" + key, "expected a positive integer");
        return static_cast<std::size_t>(v);
    };
    if (kind == "two_point") {
        out.kind = SpaceRecipe::Kind::TwoPoint;
        out.d = num("d");
        if (!(out.d > 0.0)) schema(base + "/d", "must be positive");
    } else if (kind == "hamming_cube") {
        out.kind = SpaceRecipe::Kind::HammingCube;
        out.k = count("k");
        if (r.contains("normalization")) {
            std::string n = r["normalization"].is_string() ? r["normalization"].get<std::string>() : "";
            if (n != "none" && n != "by_k") schema(base + "/normalization", "expected none or by_k");
            out.normalize_by_k = n == "by_k";
        }
    } else if (kind == "path") {
        out.kind = SpaceRecipe::Kind::Path;
        out.n = count("n");
        out.step = r.contains("step") ? num("step") : 1.0;
        if (!(out.step > 0.0)) schema(base + "/step", "must be positive");
    } else if (kind == "random_cloud") {
        out.kind = SpaceRecipe::Kind::RandomCloud;
        out.n = count("n");
        out.dim = count("dim");
        std::string metric = r.contains("metric") && r["metric"].is_string() ? r["metric"].get<std::string>() : "linf";
        if (metric != "linf" && metric != "l2") schema(base + "/metric", "expected linf or l2");
        out.l2 = metric == "l2";
        const json& s = require(r, "seed", base);
        if (!s.is_number_integer()) schema(base + "/seed", "expected an integer");
        out.seed = s.get<std::uint64_t>();
    } else if (kind == "from_file") {
        out.kind = SpaceRecipe::Kind::FromFile;
        const json& p = require(r, "path", base);
        if (!p.is_string()) schema(base + "/path", "expected a string");
        out.path = p.get<std::string>();
    } else {
        schema(base + "/kind", "unknown recipe kind '" + kind + "'");
    }
    if (r.contains("family")) {
        if (!r["family"].is_string()) schema(base + "/family", "expected a string");
        out.family = FamilyTag::parse(r["family"].get<std::string>());
    }
    if (r.contains("weights") && !(r["weights"].is_string() && r["weights"].get<std::string>() == "uniform"))
        out.weights = number_list(r["weights"], base + "/weights");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::SchemaError, "/path: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t recipe_size(const SpaceRecipe& r) {
    switch (r.kind) {
        case SpaceRecipe::Kind::TwoPoint: return 2;
        case SpaceRecipe::Kind::HammingCube: return r.k >= 63 ? std::numeric_limits<std::size_t>::max() : (std::size_t{1} << r.k);
        case SpaceRecipe::Kind::Path:
        case SpaceRecipe::Kind::RandomCloud: return r.n;
        case SpaceRecipe::Kind::FromFile: return 0;
    }
    return 0;
}

void check_size(const SpaceRecipe& r, std::size_t max_points) {
    std::size_t n = recipe_size(r);
    if (n > max_points)
        throw Error(ErrorCode::TooLarge, r.id() + " would have " + (n == std::numeric_limits<std::size_t>::max() ? std::string("too many") : std::to_string(n)) +
                                             " points (cap " + std::to_string(max_points) + ")");
}

Matrix cloud_points(const SpaceRecipe& r) {
    if (!r.seed) throw Error(ErrorCode::SchemaError, "/seed: random_cloud needs a seed");
    std::mt19937_64 rng(*r.seed);
    // Coordinates from the raw 53-bit mantissa so output does not depend on
    // the standard library's distribution implementation.
    Matrix coords(r.dim, Row(r.n));
    for (std::size_t i = 0; i < r.n; ++i)
        for (std::size_t c = 0; c < r.dim; ++c) coords[c][i] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return coords;
}

Matrix cube_metric(const SpaceRecipe& r) {
    const std::size_t n = std::size_t{1} << r.k;
    Matrix d(n, Row(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double h = static_cast<double>(std::popcount(i ^ j));
            d[i][j] = r.normalize_by_k ? h / static_cast<double>(r.k) : h;
        }
    return d;
}

std::vector<std::string> index_ids(std::size_t n) {
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
    return ids;
}

}  // namespace

std::vector<SpaceRecipe> parse_recipes(std::string_view text) {
    json doc = parse_json(text);
    std::vector<SpaceRecipe> out;
    if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(recipe_from_json(doc[i], "/" + std::to_string(i)));
    } else {
        out.push_back(recipe_from_json(doc, ""));
    }
    return out;
}

ProbVector recipe_weights(const SpaceRecipe& recipe, std::size_t n) {
    if (!recipe.weights) return ProbVector::uniform(n);
    if (recipe.weights->size() != n)
        throw Error(ErrorCode::DimensionMismatch, "/weights: expected " + std::to_string(n) + " entries");
    return ProbVector(*recipe.weights);
}

FiniteGDS generate_space(const SpaceRecipe& r, std::size_t max_points) {
    check_size(r, max_points);
    switch (r.kind) {
        case SpaceRecipe::Kind::TwoPoint:
            return validate_gds({"0", format_double(r.d)}, {{0.0, r.d}}, r.family, recipe_weights(r, 2).values());
        case SpaceRecipe::Kind::HammingCube: {
            const std::size_t n = std::size_t{1} << r.k;
            FiniteGDS x = embed_mm_space(cube_metric(r), recipe_weights(r, n), r.family);
            std::vector<std::string> ids(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t b = r.k; b-- > 0;) ids[i].push_back(((i >> b) & 1U) ? '1' : '0');
            return validate_gds(std::move(ids), x.generators(), r.family, x.mu().values());
        }
        case SpaceRecipe::Kind::Path: {
            Row f(r.n);
            for (std::size_t i = 0; i < r.n; ++i) f[i] = static_cast<double>(i) * r.step;
            return validate_gds(index_ids(r.n), {f}, r.family, recipe_weights(r, r.n).values());
        }
        case SpaceRecipe::Kind::RandomCloud: {
            Matrix coords = cloud_points(r);
            ProbVector w = recipe_weights(r, r.n);
            if (!r.l2) return validate_gds(index_ids(r.n), std::move(coords), r.family, w.values());
            return embed_mm_space(recipe_distance_matrix(r, max_points), w, r.family);
        }
        case SpaceRecipe::Kind::FromFile: {
            FiniteGDS x = parse_gds(read_file(r.path));
            if (x.num_points() > max_points) throw Error(ErrorCode::TooLarge, "file data set exceeds the point cap");
            return x;
        }
    }
    throw Error(ErrorCode::SchemaError, "/kind: unsupported");
}

Matrix recipe_distance_matrix(const SpaceRecipe& r, std::size_t max_points) {
    check_size(r, max_points);
    switch (r.kind) {
        case SpaceRecipe::Kind::HammingCube: return cube_metric(r);
        case SpaceRecipe::Kind::RandomCloud: {
            Matrix c = cloud_points(r);
            Matrix d(r.n, Row(r.n, 0.0));
            for (std::size_t i = 0; i < r.n; ++i)
                for (std::size_t j = 0; j < r.n; ++j) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < r.dim; ++k) {
                        double diff = std::abs(c[k][i] - c[k][j]);
                        acc = r.l2 ? acc + diff * diff : std::max(acc, diff);
                    }
                    d[i][j] = r.l2 ? std::sqrt(acc) : acc;
                }
            return d;
        }
        case SpaceRecipe::Kind::FromFile: return parse_distance_matrix(read_file(r.path));
        default: return induced_metric(generate_space(r, max_points));
    }
}

std::vector<SweepRow> sweep(const std::vector<SpaceRecipe>& recipes, const std::vector<double>& kappas,
                            std::size_t threads, std::size_t max_points) {
    if (recipes.empty()) throw Error(ErrorCode::EmptySet, "sweep needs at least one recipe");
    if (kappas.empty()) throw Error(ErrorCode::EmptySet, "sweep needs at least one kappa");
    struct Item {
        std::size_t recipe;
        std::vector<SweepRow> rows;
        std::exception_ptr error;
    };
    std::vector<Item> items(recipes.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i; (i = next.fetch_add(1)) < recipes.size();) {
            Item& it = items[i];
            it.recipe = i;
            try {
                const SpaceRecipe& r = recipes[i];
                Matrix d = recipe_distance_matrix(r, max_points);
                ProbVector mu = recipe_weights(r, d.size());
                for (double kappa : kappas) {
                    auto t0 = std::chrono::steady_clock::now();
                    double od = observable_diameter_hss(d, mu, kappa);
                    auto t1 = std::chrono::steady_clock::now();
                    it.rows.push_back({r.id(), r.param(), kappa, od,
                                       std::chrono::duration<double, std::milli>(t1 - t0).count()});
                }
            } catch (...) {
                it.error = std::current_exception();
            }
        }
    };
    std::size_t nthreads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min(nthreads, std::max<std::size_t>(recipes.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(work);
        work();
    }
    std::vector<SweepRow> rows;
    for (Item& it : items) {
        if (it.error) std::rethrow_exception(it.error);
        rows.insert(rows.end(), it.rows.begin(), it.rows.end());
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.recipe, a.param, a.kappa) < std::tie(b.recipe, b.param, b.kappa);
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool with_runtime) {
    std::ostringstream os;
    os << "recipe,param,kappa,od" << (with_runtime ? ",runtime_ms" : "") << "\n";
    for (const SweepRow& r : rows) {
        os << r.recipe << ',' << format_double(r.param) << ',' << format_double(r.kappa) << ',' << format_double(r.od);
        if (with_runtime) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", r.runtime_ms);
            os << ',' << buf;
        }
        os << "\n";
    }
    return os.str();
}

std::vector<double> parse_kappa_grid(const std::string& text) {
    auto to_num = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw Error(ErrorCode::SchemaError, "--kappa-grid: cannot parse '" + s + "'");
        }
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw Error(ErrorCode::SchemaError, "--kappa-grid: expected a:b:step");
        double a = to_num(parts[0]), b = to_num(parts[1]), step = to_num(parts[2]);
        if (!(step > 0.0) || b < a) throw Error(ErrorCode::SchemaError, "--kappa-grid: need step > 0 and a <= b");
        // Index-based so that a + i*step carries no accumulated drift.
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
        for (std::size_t i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * step);
    } else {
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ',');) out.push_back(to_num(p));
    }
    for (double k : out)
        if (!(k > 0.0 && k < 1.0)) throw Error(ErrorCode::InvalidKappa, "--kappa-grid: entries must lie in (0, 1)");
    return out;
}

}  // namespace gds
