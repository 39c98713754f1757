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
 * Physical ingredients of a measurement run: a validated nondegenerate
 * system Hamiltonian, a discrete pointer apparatus whose free Hamiltonian
 * commutes with the pointer momentum, the coupling observable, and the
 * switch function g(t) with unit time integral.
 *
 * Units: hbar = 1 throughout; pointer coordinates in lattice units.
 */

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "pmlab/linalg.hpp"

namespace pmlab {

/// System Hamiltonian with eigensystem computed and certified nondegenerate.
/// Eigenvalues ascend; eigenvector phases are fixed (first component with
/// magnitude above 1e-9 is made real positive) so construction is
/// deterministic: repeated calls are bit-identical.
struct SystemHamiltonian {
  HermitianOperator h;               // energy units
  std::vector<double> eigenvalues;   // ascending
  ComplexMatrix eigenvectors;        // orthonormal columns, phase-fixed
  double min_gap = 0.0;

  std::size_t dim() const { return h.dim(); }
  StateVector eigenstate(std::size_t n) const;
  /// Projector |phi_n><phi_n|.
  ComplexMatrix projector(std::size_t n) const;
};

SystemHamiltonian build_system(const HermitianOperator& h_matrix,
                               const Tolerances& tol = Tolerances::standard());

/// Discrete pointer lattice: n_points sites at spacing dq covering the
/// symmetric window [-L/2, L/2), Q diagonal on the lattice, P conjugated
/// through the unitary DFT with the standard FFT frequency grid, and
/// H_A = P^2/(2*mass) (a function of P, so [H_A, P] = 0 by construction;
/// mass = +inf is encoded as H_A = 0).
struct ApparatusModel {
  std::size_t n_points = 0;
  double dq = 0.0;
  double mass_parameter = 0.0;       // +inf allowed
  HermitianOperator q;
  HermitianOperator p;
  HermitianOperator h_a;
  std::vector<double> q_grid;        // lattice positions
  std::vector<double> p_grid;        // FFT momenta, units 2*pi/(n_points*dq)
  ComplexMatrix fourier;             // unitary DFT, row k = <p_k|

  double length() const { return static_cast<double>(n_points) * dq; }
  std::size_t dim() const { return n_points; }
  bool is_free_static() const { return !std::isfinite(mass_parameter); }
  /// exp(-i*t*H_A), built directly on the momentum grid.
  ComplexMatrix free_propagator(double t) const;
  /// exp(-i*(t*H_A + shift*P)): free evolution combined with a displacement;
  /// both generators are diagonal on the momentum grid.
  ComplexMatrix shifted_free_propagator(double t, double shift) const;
};

ApparatusModel build_apparatus(std::size_t n_points, double dq, double mass_parameter,
                               const Tolerances& tol = Tolerances::standard());

/// Coupling switch profile. ideal_constant is g = 1/tau on [0, tau] (the
/// switching transients are idealized away); smooth_ramp uses cosine-squared
/// half-ramps of width ramp_fraction*tau at both ends with the plateau
/// height adjusted so the time integral stays exactly 1.
struct SwitchProfile {
  enum class Kind { ideal_constant, smooth_ramp };
  Kind kind = Kind::ideal_constant;
  double tau = 1.0;
  double ramp_fraction = 0.1;  // only for smooth_ramp, in (0, 0.2]
};

/// g(t); returns 0 outside [0, tau] (documented, not an error).
double g_of_t(const SwitchProfile& sw, double t);

/// Exact closed-form value of the time integral of g (1 for valid profiles).
double switch_integral(const SwitchProfile& sw);

void validate_switch(const SwitchProfile& sw);

struct TimeSlicing {
  std::size_t n_steps = 256;  // midpoint scheme
};

/// Everything the propagators need: H_S, apparatus, coupling observable O,
/// switch profile, slicing controls.
struct MeasurementSetup {
  SystemHamiltonian system;
  ApparatusModel apparatus;
  HermitianOperator observable;
  SwitchProfile sw;
  TimeSlicing slicing;
  Tolerances tol = Tolerances::standard();

  std::size_t dim_system() const { return system.dim(); }
  std::size_t dim_apparatus() const { return apparatus.dim(); }
  std::size_t dim_joint() const { return system.dim() * apparatus.dim(); }
};

void validate_setup(const MeasurementSetup& setup);

/// H_S (x) 1 + 1 (x) H_A + g(t) * O (x) P on the joint space.
HermitianOperator total_hamiltonian(const MeasurementSetup& setup, double t);

// Joint-space embeddings used across modules.
ComplexMatrix embed_system(const ComplexMatrix& op_s, std::size_t dim_apparatus,
                           const Tolerances& tol = Tolerances::standard());
ComplexMatrix embed_apparatus(const ComplexMatrix& op_a, std::size_t dim_system,
                              const Tolerances& tol = Tolerances::standard());

}  // namespace pmlab
