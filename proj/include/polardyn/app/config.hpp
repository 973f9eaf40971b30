#pragma once

// Run configuration for the command-line front end. See docs/config.md for the
// JSON layout.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polardyn/channels.hpp"
#include "polardyn/lindblad.hpp"
#include "polardyn/types.hpp"

namespace polardyn::app {

/// Malformed or inconsistent configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Spacing { linear, log };

struct TimeGrid {
  double start = 0.0;
  double stop = 1.0;
  int count = 11;
  Spacing spacing = Spacing::linear;

  std::vector<double> points() const;
};

struct Tolerances {
  double normality = 1e-9;   ///< polar-part commutation / generator normality
  double isotropy = 1e-9;
  double choi = 1e-8;
  double contractivity = 1e-8;
  double unitality = 1e-10;
  double semigroup = 1e-10;
};

struct RunConfig {
  int dim = 2;
  std::string basis = "gell-mann";
  std::string model;  ///< descriptive label of the generator or channel
  std::optional<LindbladGenerator> generator;
  std::optional<KrausChannel> channel;
  std::optional<NmrParams> nmr;  ///< set when the generator is the NMR model
  TimeGrid grid;
  std::optional<CMat> initial_state;
  std::string output_path;
  std::string format;
  Tolerances tol;
  double decompose_time = 1.0;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Complex matrices are nested row-major arrays whose entries are [re, im]
/// pairs or plain real numbers.
CMat matrix_from_json(const nlohmann::json& j, int dim, const std::string& what);
nlohmann::json complex_matrix_to_json(const CMat& m);
nlohmann::json real_matrix_to_json(const Mat& m);
nlohmann::json vector_to_json(const Vec& v);

nlohmann::json generator_to_json(const LindbladGenerator& gen);
LindbladGenerator generator_from_json(const nlohmann::json& j, int dim);

}  // namespace polardyn::app
