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

#include "pmlab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pmlab {

namespace {

void check_edge_clearance(double mean, double sigma, const ApparatusModel& app,
                          const char* stage) {
  const double lo = app.q_grid.front();
  const double hi = app.q_grid.back();
  if (mean - 4.0 * sigma < lo || mean + 4.0 * sigma > hi) {
    std::ostringstream os;
    os << stage << ": pointer packet within 4 sigma of the lattice edge (mean " << mean
       << ", sigma " << sigma << ", window [" << lo << ", " << hi << "])";
    throw ReadoutError(os.str());
  }
}

double real_fidelity_against(const StateVector& psi_in, const ComplexMatrix& rho_s) {
  const std::vector<cdouble> y = apply(rho_s, psi_in.amplitudes());
  return kernels::dotc(psi_in.data(), y.data(), psi_in.dim()).real();
}

}  // namespace

StateVector prepare_packet(const ApparatusModel& apparatus, const PointerPreparation& prep) {
  if (!(prep.width_sigma > 0.0)) throw DimensionError("packet width_sigma must be positive");
  check_edge_clearance(prep.center_q, prep.width_sigma, apparatus, "prepare_packet");
  const std::size_t n = apparatus.n_points;
  std::vector<cdouble> amps(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double q = apparatus.q_grid[j];
    const double d = q - prep.center_q;
    const double envelope = std::exp(-d * d / (4.0 * prep.width_sigma * prep.width_sigma));
    amps[j] = envelope * std::exp(cdouble{0.0, prep.momentum_offset * q});
  }
  return StateVector::normalized(std::move(amps));
}

std::vector<double> pointer_marginal(const StateVector& joint, std::size_t dim_system,
                                     const ApparatusModel& apparatus) {
  const std::size_t n = apparatus.n_points;
  if (joint.dim() != dim_system * n)
    throw DimensionError("pointer_marginal: joint state does not match dimS*n_points");
  std::vector<double> probs(n, 0.0);
  for (std::size_t i = 0; i < dim_system; ++i)
    for (std::size_t a = 0; a < n; ++a) probs[a] += std::norm(joint[i * n + a]);
  return probs;
}

std::pair<double, double> pointer_moments(const StateVector& joint, std::size_t dim_system,
                                          const ApparatusModel& apparatus) {
  const std::vector<double> probs = pointer_marginal(joint, dim_system, apparatus);
  double mean = 0.0, second = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    mean += apparatus.q_grid[a] * probs[a];
    second += apparatus.q_grid[a] * apparatus.q_grid[a] * probs[a];
  }
  return {mean, std::sqrt(std::max(second - mean * mean, 0.0))};
}

double readout_pointer(const StateVector& final_state, const ApparatusModel& apparatus,
                       const StateVector& reference_state) {
  if (final_state.dim() != reference_state.dim())
    throw DimensionError("readout_pointer: final/reference dimension mismatch");
  if (final_state.dim() % apparatus.n_points != 0)
    throw DimensionError("readout_pointer: joint dimension not divisible by n_points");
  const std::size_t dim_system = final_state.dim() / apparatus.n_points;
  const auto [mean_f, sd_f] = pointer_moments(final_state, dim_system, apparatus);
  const auto [mean_r, sd_r] = pointer_moments(reference_state, dim_system, apparatus);
  check_edge_clearance(mean_f, sd_f, apparatus, "readout");
  check_edge_clearance(mean_r, sd_r, apparatus, "readout (reference)");
  return mean_f - mean_r;
}

RunRecord run_protective(const MeasurementSetup& setup, const StateVector& system_state,
                         const PointerPreparation& pointer) {
  validate_setup(setup);
  if (system_state.dim() != setup.dim_system())
    throw DimensionError("run_protective: system state dimension mismatch");

  const StateVector packet = prepare_packet(setup.apparatus, pointer);
  const StateVector joint0 = tensor_product(system_state, packet, setup.tol);

  RunRecord rec;
  const ComplexMatrix u = evolve_exact(setup, &rec.slicing_defect);
  rec.final_state = apply(u, joint0);
  rec.tau = setup.sw.tau;

  // Baseline: same packet under the free apparatus evolution only. This
  // subtracts the H_A drift exactly, leaving the coupling displacement.
  const ComplexMatrix free_u = setup.apparatus.free_propagator(setup.sw.tau);
  const StateVector chi_free = apply(free_u, packet);
  const StateVector reference = tensor_product(system_state, chi_free, setup.tol);
  rec.pointer_shift = readout_pointer(rec.final_state, setup.apparatus, reference);
  rec.expected_value_reported = rec.pointer_shift;

  const ComplexMatrix rho_s = reduced_density(rec.final_state, setup.dim_system(),
                                              setup.dim_apparatus(), Factor::system);
  rec.system_fidelity = real_fidelity_against(system_state, rho_s);
  rec.entropy = entanglement_entropy(rec.final_state, setup.dim_system(), setup.dim_apparatus());
  return rec;
}

RunRecord run_von_neumann(const SystemHamiltonian& system, const ApparatusModel& apparatus,
                          const HermitianOperator& o, const StateVector& system_state,
                          const PointerPreparation& pointer, double coupling_strength,
                          const Tolerances& tol) {
  if (o.dim() != system.dim())
    throw DimensionError("run_von_neumann: observable/system dimension mismatch");
  if (system_state.dim() != system.dim())
    throw DimensionError("run_von_neumann: system state dimension mismatch");
  if (coupling_strength == 0.0)
    throw DimensionError("run_von_neumann: coupling_strength must be nonzero");

  const StateVector packet = prepare_packet(apparatus, pointer);
  const StateVector joint0 = tensor_product(system_state, packet, tol);

  // Impulsive regime: free Hamiltonians suppressed, one kick exponential.
  const ComplexMatrix kick = tensor_product(o.matrix(), apparatus.p.matrix(), tol);
  const ComplexMatrix u =
      expm_hermitian(HermitianOperator(kick, tol), cdouble{0.0, -coupling_strength});

  RunRecord rec;
  rec.final_state = apply(u, joint0);
  rec.tau = 0.0;
  rec.slicing_defect = 0.0;
  rec.pointer_shift = readout_pointer(rec.final_state, apparatus, joint0);
  rec.expected_value_reported = rec.pointer_shift / coupling_strength;

  const ComplexMatrix rho_s =
      reduced_density(rec.final_state, system.dim(), apparatus.dim(), Factor::system);
  rec.system_fidelity = real_fidelity_against(system_state, rho_s);
  rec.entropy = entanglement_entropy(rec.final_state, system.dim(), apparatus.dim());

  // Flag unresolvable records: populated eigenvalue branches closer than
  // 4 sigma on the pointer after the kick.
  const EighResult oe = eigh(o);
  std::vector<double> populated;
  for (std::size_t k = 0; k < o.dim(); ++k) {
    cdouble amp{0.0, 0.0};
    for (std::size_t i = 0; i < o.dim(); ++i)
      amp += std::conj(oe.eigenvectors(i, k)) * system_state[i];
    if (std::norm(amp) > 1e-12) populated.push_back(oe.eigenvalues[k]);
  }
  std::sort(populated.begin(), populated.end());
  for (std::size_t k = 0; k + 1 < populated.size(); ++k) {
    const double sep = (populated[k + 1] - populated[k]) * std::abs(coupling_strength);
    if (sep > 1e-12 && sep < 4.0 * pointer.width_sigma) {
      std::ostringstream os;
      os << "pointer branches separated by " << sep << " < 4 sigma = "
         << 4.0 * pointer.width_sigma << "; record may be unresolvable";
      rec.warnings.push_back(os.str());
      break;
    }
  }
  return rec;
}

StateVector reconstruct_state(const std::vector<std::pair<HermitianOperator, double>>& expectations,
                              std::size_t dim, double consistency_tol, double* residual_out) {
  if (dim == 0) throw DimensionError("reconstruct_state: dim must be positive");
  for (const auto& [op, value] : expectations)
    if (op.dim() != dim) throw DimensionError("reconstruct_state: observable dimension mismatch");

  // Real parameterization of a Hermitian rho: d diagonal entries, then
  // (Re, Im) of each upper off-diagonal entry.
  const std::size_t nparams = dim * dim;
  const std::size_t nrows = expectations.size() + 1;  // + trace row
  std::vector<double> a(nrows * nparams, 0.0);
  std::vector<double> b(nrows, 0.0);

  auto param_index = [dim](std::size_t i, std::size_t j, bool imag_part) {
    // offsets: diag block first, then pair blocks in row-major (i<j) order
    std::size_t off = dim;
    for (std::size_t r = 0; r < i; ++r) off += 2 * (dim - r - 1);
    off += 2 * (j - i - 1);
    return off + (imag_part ? 1 : 0);
  };

  for (std::size_t r = 0; r < expectations.size(); ++r) {
    const ComplexMatrix& o = expectations[r].first.matrix();
    double* row = a.data() + r * nparams;
    for (std::size_t i = 0; i < dim; ++i) row[i] = o(i, i).real();
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i + 1; j < dim; ++j) {
        row[param_index(i, j, false)] = 2.0 * o(i, j).real();
        row[param_index(i, j, true)] = 2.0 * o(i, j).imag();
      }
    b[r] = expectations[r].second;
  }
  // trace(rho) = 1
  for (std::size_t i = 0; i < dim; ++i) a[expectations.size() * nparams + i] = 1.0;
  b[expectations.size()] = 1.0;

  std::size_t rank = 0;
  const std::vector<double> x = solve_least_squares(a, nrows, nparams, b, &rank, nullptr);
  if (rank < nparams) {
    std::ostringstream os;
    os << "expectation set is tomographically incomplete: rank " << rank << " < " << nparams
       << " parameters at dim " << dim;
    throw IncompleteTomographyError(os.str());
  }

  ComplexMatrix rho(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) rho(i, i) = x[i];
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      const cdouble z{x[param_index(i, j, false)], x[param_index(i, j, true)]};
      rho(i, j) = z;
      rho(j, i) = std::conj(z);
    }

  const EighResult es = eigh(HermitianOperator(std::move(rho)));
  std::vector<cdouble> top(dim);
  for (std::size_t i = 0; i < dim; ++i) top[i] = es.eigenvectors(i, dim - 1);
  StateVector psi = StateVector::normalized(std::move(top));

  // fix global phase like the eigenbasis convention
  std::vector<cdouble> amps = psi.amplitudes();
  for (std::size_t i = 0; i < dim; ++i)
    if (std::abs(amps[i]) > 1e-9) {
      kernels::scale(amps.data(), std::conj(amps[i]) / std::abs(amps[i]), dim);
      break;
    }
  psi = StateVector::normalized(std::move(amps));

  double residual = 0.0;
  for (const auto& [op, value] : expectations)
    residual = std::max(residual, std::abs(expectation(op, psi).real() - value));
  if (residual_out) *residual_out = residual;
  if (residual > consistency_tol) {
    std::ostringstream os;
    os << "expectations inconsistent with a pure state: residual " << residual << " > "
       << consistency_tol;
    throw InconsistentExpectationsError(residual, os.str());
  }
  return psi;
}

}  // namespace pmlab
