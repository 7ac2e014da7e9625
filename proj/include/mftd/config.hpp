#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mftd/geometry.hpp"

namespace mftd {

// A named inclusion: a builtin curve label or user series coefficients, with
// material values that default to the [material] section.
struct InclusionSpec {
    std::string name;
    std::string curve;  // builtin label, or "series" for user coefficients
    double a = 0.0;
    double b = 0.0;
    SeriesComponent x;
    SeriesComponent y;
    double h = 0.02;
    double eps = 5.0;
    double mu = 5.0;
};

struct SceneSpec {
    std::string name;
    std::vector<std::string> inclusions;  // names of InclusionSpec entries
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::uint64_t seed = 1;
    int workers = 0;
    std::vector<std::string> functionals{"etd_multi"};

    int L = 4;
    std::vector<int> K_values{16};
    double lambda_min = 0.2;
    double lambda_max = 0.5;
    std::size_t single_index = 0;  // frequency index for single-frequency functionals

    int lattice = 128;
    double clip = 0.95;
    int boundary_points = 128;
    int curve_nodes = 200;

    std::optional<double> snr_db = 15.0;  // empty for clean data

    double eps0 = 1.0;
    double mu0 = 1.0;
    std::vector<InclusionSpec> inclusions;
    std::vector<SceneSpec> scenes;

    bool fit = false;
    double ridge_quantile = 0.01;
    int fit_degree = 5;
    std::optional<double> drop_tol;  // default 1e-2 noisy, 1e-6 clean

    double effective_drop_tol() const { return drop_tol ? *drop_tol : (snr_db ? 1e-2 : 1e-6); }
    const InclusionSpec& inclusion(const std::string& name) const;
    std::vector<ThinInclusion> scene_inclusions(const SceneSpec& scene) const;
};

// Known functional names.
const std::vector<std::string>& known_functionals();

// Parses the INI-style text (sections [experiment], [incident], [grid],
// [noise], [material], [postprocess], [inclusion NAME], [scene NAME]).
// Throws ConfigError for syntax errors, unknown keys and malformed values.
// Without scene sections a single scene "sigma1" is assumed.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical text form; parse_config_text(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& c);

struct Diagnostic {
    enum class Level { error, warning };
    Level level;
    std::string message;
};

// Dry-run precondition checks, including a resonance scan over every
// frequency. Never throws; an empty result means "ok".
std::vector<Diagnostic> validate(const ExperimentConfig& c);
// Parses then validates; parse failures become a single error diagnostic.
std::vector<Diagnostic> validate_text(const std::string& text);

}  // namespace mftd
