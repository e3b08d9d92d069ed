#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hardynil/averages.hpp"
#include "hardynil/orbits.hpp"
#include "hardynil/windows.hpp"

namespace hardynil::cli {

/// Experiment document.  Factor i is generator i acting on block i with
/// exponent functions[i] and test function tests[i].
///
///   {
///     "group": {"dim": 3},                 // or {"dim": [3, 2]}, one per factor
///     "generators": [["phi", "0", "sqrt2"], ...],   // row-major strict upper
///     "functions": ["t^{3/2}", "t*log(t)"],
///     "base_point": [[...], ...],          // optional, same shape
///     "floor_mode": "real" | "integer_part",
///     "N_grid": "1e3:1e6:decade" | [1000, 10000],
///     "tests": ["hchar:1,0", "bump:1,1,1"],
///     "declared_closure": "full" | "undeclared",
///     "window": "auto" | {"gamma": "3/5"},
///     "precision": "double" | "dd",
///     "seed": 0,
///     "threads": 0
///   }
///
/// Matrix entries are numbers or constant expressions ("1/3", "phi",
/// "(1 + sqrt2)").  Unknown keys are rejected.
struct ExperimentConfig {
  std::vector<int> dims;
  std::vector<std::vector<std::string>> generators;
  std::vector<std::string> functions;
  std::optional<std::vector<std::vector<std::string>>> base_point;
  orbits::FloorMode floor_mode = orbits::FloorMode::real;
  std::vector<std::int64_t> n_grid;
  std::vector<std::string> tests;
  averages::Closure declared_closure = averages::Closure::undeclared;
  std::optional<Rational> window_gamma;  // nothing means automatic search
  orbits::Precision precision = orbits::Precision::double_double;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError with the offending key in the message.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// "a:b:decade" (a, 10a, ... <= b), a comma list, or one number; numbers may
/// use exponent notation (1e6) but must be positive integers.  Throws
/// ConfigError.
std::vector<std::int64_t> parse_grid(std::string_view text);

/// Value of a constant expression such as "phi" or "-1/3".
DD parse_entry(std::string_view text);

orbits::OrbitConfig to_orbit_config(const ExperimentConfig& cfg);
averages::AverageExperiment to_experiment(const ExperimentConfig& cfg);

/// Window plan for the non-polynomial parts that need one: the configured
/// gamma with its orders, or the automatic search.  Empty inputs when every
/// function is polynomial up to bounded terms.
windows::WindowPlan window_plan(const ExperimentConfig& cfg);

}  // namespace hardynil::cli
