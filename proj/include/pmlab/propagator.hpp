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
 * Joint propagators. evolve_exact computes the full time-ordered evolution:
 * one Hermitian exponential for the ideal constant switch (where the
 * Hamiltonian commutes with itself across the interval), an ordered product
 * of midpoint-rule slice exponentials for smooth ramps, with a step-doubling
 * self-test. build_u_app computes the adiabatic approximant generated by the
 * sandwiched observable instead of the raw coupling.
 */

#pragma once

#include "pmlab/model.hpp"

namespace pmlab {

struct PropagatorPair {
  ComplexMatrix u_exact;
  ComplexMatrix u_app;
  double norm_diff = 0.0;            // |U - U_app| (largest singular value)
  double conservation_defect = 0.0;  // |U^dag (H_S x 1) U - H_S x 1|
  double slicing_defect = 0.0;       // doubling-test defect of u_exact
};

/// Exact propagator over [0, tau]. For smooth ramps the returned matrix is
/// the finer of the doubled slicings and *slicing_defect_out (if given)
/// receives |U_n - U_2n|; an AccuracyError carrying that defect is thrown
/// when it exceeds setup.tol.slicing.
ComplexMatrix evolve_exact(const MeasurementSetup& setup, double* slicing_defect_out = nullptr);

/// Ordered midpoint product with exactly n_steps slices (no doubling test);
/// building block for convergence studies.
ComplexMatrix evolve_sliced(const MeasurementSetup& setup, std::size_t n_steps);

/// Otilde = sum_n P_n O P_n in the eigenbasis of the system Hamiltonian.
/// Commutes with H_S and matches O's diagonal there; certified to
/// tol.commutation at construction.
HermitianOperator sandwich_observable(const SystemHamiltonian& system, const HermitianOperator& o,
                                      const Tolerances& tol = Tolerances::standard());

/// U_app = exp(-i*(H_S + H_A)*tau - i*Otilde (x) P), one Hermitian exponential.
ComplexMatrix build_u_app(const MeasurementSetup& setup);

/// Both propagators plus the operator-norm diagnostics.
PropagatorPair compare_propagators(const MeasurementSetup& setup);

/// |U^dag (H_S x 1) U - H_S x 1| for an arbitrary unitary on the joint space.
double conservation_defect_of(const MeasurementSetup& setup, const ComplexMatrix& u);

/// |U_n - U_2n| for n = n0 * 2^level, level = 0..levels-1. Ratios of
/// successive entries expose the slicing order (about 4 for midpoint).
std::vector<double> slicing_deltas(const MeasurementSetup& setup, std::size_t n0,
                                   std::size_t levels);

/// Max-entry unitarity defect |U^dag U - I|_max.
double unitarity_defect(const ComplexMatrix& u);

}  // namespace pmlab
