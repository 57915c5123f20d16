#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gds/core.hpp"
#include "gds/lip_families.hpp"
#include "gds/set_distances.hpp"
#include "gds/staircase.hpp"
#include "gds/transforms.hpp"

namespace gds {

// Data set JSON, either
//   {"points": [...], "weights": [...], "family": "TB", "features": {"generators": [[...], ...]}}
// or {"points": [...], "weights": [...], "family": "TB", "distance_matrix": [[...], ...]}.
// The second form goes through embed_mm_space. Schema problems raise
// SchemaError whose message starts with the offending JSON pointer.
FiniteGDS parse_gds(std::string_view text);
std::string serialize_gds(const FiniteGDS& x);

// Distance matrix of a data set file: the stored matrix for the
// distance_matrix form, the induced metric otherwise.
Matrix parse_distance_matrix(std::string_view text);

// {"atoms": [[value, mass], ...]}
DiscreteMeasureR parse_measure(std::string_view text);
std::string serialize_measure(const DiscreteMeasureR& m);

// {"c": ..., "l": ..., "u": ...} with "-inf" / "inf" for unbounded ends.
ClipMap parse_clip_map(std::string_view text);
std::string serialize_clip_map(const ClipMap& p);

// {"features": [...], "R": ...} with "inf" allowed for R.
MeasurementSpec parse_measurement_spec(std::string_view text);
std::string serialize_measurement_spec(const MeasurementSpec& s);

std::string serialize_bracket(const Bracket& b);
std::string serialize_series(const SeriesBracket& s);
std::string serialize_verdict(const DominationVerdict& v);

std::string format_double(double v);  // shortest round-trip form

struct SpaceRecipe {
    enum class Kind { TwoPoint, HammingCube, Path, RandomCloud, FromFile };
    Kind kind = Kind::TwoPoint;
    double d = 1.0;               // two_point
    std::size_t k = 1;            // hamming_cube
    bool normalize_by_k = false;  // hamming_cube
    std::size_t n = 2;            // path, random_cloud
    double step = 1.0;            // path
    std::size_t dim = 1;          // random_cloud
    bool l2 = false;              // random_cloud metric
    std::optional<std::uint64_t> seed;  // mandatory for random_cloud
    std::string path;             // from_file
    FamilyTag family = FamilyTag::tb();
    std::optional<std::vector<double>> weights;

    std::string id() const;
    double param() const;
};

inline constexpr std::size_t kDefaultMaxPoints = 4096;

std::vector<SpaceRecipe> parse_recipes(std::string_view text);  // a JSON object or array of objects
FiniteGDS generate_space(const SpaceRecipe& recipe, std::size_t max_points = kDefaultMaxPoints);
// Metric of the recipe's space without building the data set where possible.
Matrix recipe_distance_matrix(const SpaceRecipe& recipe, std::size_t max_points = kDefaultMaxPoints);
ProbVector recipe_weights(const SpaceRecipe& recipe, std::size_t n);

struct SweepRow {
    std::string recipe;
    double param = 0.0;
    double kappa = 0.0;
    double od = 0.0;
    double runtime_ms = 0.0;
};

// od(X; -kappa) through the distance-matrix path for every recipe and kappa;
// rows sorted by (recipe, param, kappa) whatever the scheduling.
std::vector<SweepRow> sweep(const std::vector<SpaceRecipe>& recipes, const std::vector<double>& kappas,
                            std::size_t threads = 0, std::size_t max_points = kDefaultMaxPoints);
std::string sweep_csv(const std::vector<SweepRow>& rows, bool with_runtime = true);

// "a:b:step" inclusive grid, or a comma-separated list.
std::vector<double> parse_kappa_grid(const std::string& text);

}  // namespace gds
