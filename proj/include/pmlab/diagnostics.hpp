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
 * Convergence and conservation diagnostics over tau grids: how far the
 * exact propagator sits from the adiabatic approximant, whether it conserves
 * the system energy, and the matrix-element version of the same question.
 * Defects aggregate by max (worst case), never by mean.
 */

#pragma once

#include "pmlab/propagator.hpp"

#include <string>

namespace pmlab {

/// One row per tau; fixed CSV column order:
/// tau, norm_diff, conservation_defect, matrix_element_defect.
struct ConvergenceTable {
  std::vector<double> tau_grid;
  std::vector<double> norm_diff;
  std::vector<double> conservation_defect;
  std::vector<double> matrix_element_defect;

  std::string to_csv() const;  // header row, LF endings, 17 significant digits
};

/// |AB - BA| in operator norm.
double commutator_norm(const HermitianOperator& a, const HermitianOperator& b);

/// For each tau: recompute the propagator pair and record |U - U_app| and
/// the conservation defect |U^dag (H_S x 1) U - H_S x 1|. The grid must be
/// ascending with at least 4 points. matrix_element_defect is filled with 0
/// (this scan carries no apparatus state to sandwich with).
ConvergenceTable conservation_scan(const MeasurementSetup& setup,
                                   const std::vector<double>& tau_grid);

/// For each tau and each eigenpair (m, n): the deviation of
/// <phi_m chi| U^dag (H_S x 1) U |phi_n chi> from E_n delta_mn, aggregated by
/// max; each deviation is checked against the operator-norm majorization
/// bound. Fills all three defect columns.
ConvergenceTable matrix_element_scan(const MeasurementSetup& setup, const StateVector& chi,
                                     const std::vector<double>& tau_grid);

/// Momentum-resolved conjugation check: max over the p grid and eigenpairs
/// of |<phi_m| e^{i(tau H_S + p O)} H_S e^{-i(tau H_S + p O)} |phi_n> -
/// E_n delta_mn|. "Almost all p" is sampled on the finite grid; measure-zero
/// exceptions are not representable here.
double p_resolved_check(const SystemHamiltonian& system, const HermitianOperator& o,
                        const std::vector<double>& p_grid, double tau);

/// g(t) * |[O, H_S] (x) P|: the instantaneous commutator scale whose 1/tau
/// falloff does NOT imply convergence of the propagators.
double instantaneous_commutator_norm(const MeasurementSetup& setup, double t);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Evenly spaced sample of the apparatus momentum band (default grid for
/// p_resolved_check).
std::vector<double> default_p_grid(const ApparatusModel& apparatus, std::size_t count = 64);

}  // namespace pmlab
