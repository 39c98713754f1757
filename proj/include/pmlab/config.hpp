// Copyright 2026 the pmlab developers.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Scenario configuration: a plain hierarchical key-value text format with
 * explicit re/im number pairs for complex entries. Grammar (line oriented):
 *
 *   key = value [value ...]     scalars and lists
 *   key {                       nested block (brace ends the line)
 *     ...
 *   }
 *   # comment                   blank lines and #-comments ignored
 *
 * Complex matrices are blocks with `dim = n` followed by n `row` lines of
 * 2n numbers (re im pairs, row-major). Parsing validates everything before
 * any computation and reports *all* problems, not just the first.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmlab/measurement.hpp"
#include "pmlab/scenarios.hpp"

namespace pmlab {

struct ConfigIssue {
  std::size_t line = 0;  // 1-based; 0 when not tied to a location
  std::size_t col = 0;
  std::string path;      // dotted key path, e.g. "observable.row[1]"
  std::string message;

  std::string format() const;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<ConfigIssue>& issues);
  std::vector<ConfigIssue> issues_;
};

struct MatrixSpec {
  std::size_t dim = 0;
  std::vector<cdouble> entries;  // row-major
};

struct SystemSpec {
  std::string builder;                // "", "two_box", "diag"
  std::optional<MatrixSpec> matrix;   // inline matrix
  std::vector<double> diag;           // builder = diag
  std::optional<double> epsilon;      // builder = two_box

  bool present() const { return !builder.empty() || matrix.has_value(); }
};

/// Parsed and validated scenario configuration with documented defaults
/// filled in.
struct ScenarioConfig {
  std::string scenario;
  SystemSpec system;
  SystemSpec system_end;  // adiabatic_retune only

  std::size_t n_points = 256;
  double dq = 0.125;
  double mass_parameter = 1000.0;

  std::vector<MatrixSpec> observables;

  std::string switch_kind = "ideal_constant";
  std::optional<double> tau;
  std::vector<double> tau_grid;
  double ramp_fraction = 0.1;

  std::size_t n_steps = 256;
  PointerPreparation pointer{0.0, 0.5, 0.0};

  std::string input_kind = "eigenstate";  // eigenstate | superposition
  std::size_t input_index = 0;
  std::vector<cdouble> input_coeffs;

  double coupling_strength = 5.0;
  std::size_t target_index = 0;
  std::size_t ramp_steps = 2000;
  double ramp_time = 50.0;

  std::string output_format = "json";  // json | csv
  std::string output_path;             // empty = stdout
  std::uint64_t seed = 0;
};

/// Parse + validate; throws ConfigError carrying every issue found.
ScenarioConfig parse_config(const std::string& text);

/// Canonical normalized text form; parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

/// Known scenario names with one-line descriptions (for `list-scenarios`).
std::vector<std::pair<std::string, std::string>> known_scenarios();

// ---- execution of a validated config ----

SystemHamiltonian system_from_spec(const SystemSpec& spec, const Tolerances& tol);
HermitianOperator observable_from_spec(const MatrixSpec& spec, const Tolerances& tol);
StateVector input_state_from_config(const ScenarioConfig& cfg, const SystemHamiltonian& system);
ScenarioOptions options_from_config(const ScenarioConfig& cfg, const Tolerances& tol);

/// Run the configured scenario (`run` subcommand).
ScenarioReport run_config(const ScenarioConfig& cfg, const Tolerances& tol);

/// Run the tau-grid sweep (`sweep` subcommand): conservation scan plus the
/// matrix-element scan against the configured pointer packet.
ScenarioReport sweep_config(const ScenarioConfig& cfg, const Tolerances& tol);

}  // namespace pmlab
