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
 * Canned experiments, each returning a structured report: the tunneling
 * doublet ("two box") model with its null protective readout, sequential
 * tomography on a protected eigenstate, and quasi-static Hamiltonian
 * retuning between measurement contexts.
 */

#pragma once

#include "pmlab/diagnostics.hpp"
#include "pmlab/measurement.hpp"

namespace pmlab {

/// Two-level effective subspace spanned by the symmetric/antisymmetric
/// combinations phi_plus (index 0, energy -epsilon) and phi_minus (index 1,
/// energy +epsilon) of two localized box states; the box observable is
/// -|L><L| + |R><R|, which has zero diagonal in the energy basis.
struct TwoBoxModel {
  double epsilon = 0.0;
  SystemHamiltonian system;
  StateVector phi_plus, phi_minus, phi_left, phi_right;
  HermitianOperator o_box;
};

TwoBoxModel make_two_box(double epsilon, const Tolerances& tol = Tolerances::standard());

struct Verdict {
  std::string id;
  bool pass = false;
  double measured = 0.0;
};

/// Scalar curve attached to a report (e.g. a discrepancy trend over tau).
struct ScalarSeries {
  std::string id;
  std::vector<double> x;
  std::vector<double> y;
};

struct ScenarioReport {
  std::string name;
  std::vector<RunRecord> records;
  std::vector<std::pair<std::string, ConvergenceTable>> tables;
  std::vector<ScalarSeries> series;
  std::vector<Verdict> verdicts;

  bool all_pass() const;
};

/// JSON form of a report (stable field names; see docs/report-schema.md).
std::string report_to_json(const ScenarioReport& report);

/// Shared knobs for the scenario runners; the defaults are the reference
/// apparatus used throughout the shipped configs.
struct ScenarioOptions {
  std::size_t n_points = 256;
  double dq = 0.125;
  double mass_parameter = 1000.0;
  PointerPreparation pointer{0.0, 0.5, 0.0};
  double vn_strength = 5.0;
  TimeSlicing slicing{256};
  Tolerances tol = Tolerances::standard();
};

/// The two-box experiment: verifies the vanishing sandwiched observable,
/// runs protective measurements on phi_plus and phi_left (both shifts must
/// be null), the impulsive comparison on phi_plus (bimodal, equal weights),
/// and tracks how the phi_plus/phi_minus conditional pointer states
/// converge toward each other along the tau grid.
ScenarioReport scenario_two_box(double epsilon, const std::vector<double>& tau_grid,
                                const ScenarioOptions& opts = {});

/// Sequential protective tomography: one run per observable on the same
/// evolving state (each run's output system state feeds the next), then a
/// least-squares reconstruction compared against the target eigenstate.
ScenarioReport scenario_tomography(const SystemHamiltonian& system, std::size_t target_index,
                                   const std::vector<HermitianOperator>& observables, double tau,
                                   const ScenarioOptions& opts = {});

/// Quasi-static retuning from h_start to h_end along the linear
/// interpolation path (no apparatus coupling): tracks an eigenstate through
/// ramp_steps midpoint slices, reports per-step tracking fidelity, the
/// sudden-switch baseline, and a monotonicity sweep over shorter ramps.
ScenarioReport scenario_adiabatic_retune(const SystemHamiltonian& h_start,
                                         const SystemHamiltonian& h_end, std::size_t ramp_steps,
                                         double ramp_time, std::size_t target_index = 0,
                                         const Tolerances& tol = Tolerances::standard());

}  // namespace pmlab
