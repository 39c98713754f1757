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

#include "pmlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pmlab {

namespace {
constexpr double kPhaseThreshold = 1e-9;  // "first nonzero" component cutoff
}

StateVector SystemHamiltonian::eigenstate(std::size_t n) const {
  if (n >= dim()) throw DimensionError("eigenstate index out of range");
  std::vector<cdouble> v(dim());
  for (std::size_t i = 0; i < dim(); ++i) v[i] = eigenvectors(i, n);
  return StateVector(std::move(v));
}

ComplexMatrix SystemHamiltonian::projector(std::size_t n) const {
  if (n >= dim()) throw DimensionError("projector index out of range");
  ComplexMatrix p(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      p(i, j) = eigenvectors(i, n) * std::conj(eigenvectors(j, n));
  return p;
}

SystemHamiltonian build_system(const HermitianOperator& h_matrix, const Tolerances& tol) {
  SystemHamiltonian sys;
  sys.h = h_matrix;
  EighResult es = eigh(h_matrix);
  const std::size_t n = es.eigenvalues.size();

  double norm_scale = 0.0;
  for (double e : es.eigenvalues) norm_scale = std::max(norm_scale, std::abs(e));
  const double gap_tol = tol.degeneracy_rel * norm_scale;

  sys.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double gap = es.eigenvalues[i + 1] - es.eigenvalues[i];
    if (gap <= gap_tol) {
      std::ostringstream os;
      os << "degenerate spectrum: levels " << i << " and " << i + 1 << " have gap " << gap
         << " (tolerance " << gap_tol << ")";
      throw DegenerateSpectrumError(i, i + 1, gap, os.str());
    }
    sys.min_gap = std::min(sys.min_gap, gap);
  }

  // Phase convention: first component above threshold made real positive,
  // so repeated builds are bit-identical.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const cdouble v = es.eigenvectors(i, j);
      if (std::abs(v) > kPhaseThreshold) {
        const cdouble phase = std::conj(v) / std::abs(v);
        for (std::size_t k = 0; k < n; ++k) es.eigenvectors(k, j) *= phase;
        break;
      }
    }
  }

  // Certify V^dag V = I.
  const ComplexMatrix gram = es.eigenvectors.adjoint() * es.eigenvectors;
  const ComplexMatrix eye = ComplexMatrix::identity(n);
  const double unit_defect = kernels::max_abs_diff(gram.data(), eye.data(), gram.size());
  if (unit_defect > tol.unitarity) {
    std::ostringstream os;
    os << "eigenvector matrix not unitary: defect " << unit_defect;
    throw NumericalError(os.str());
  }

  sys.eigenvalues = std::move(es.eigenvalues);
  sys.eigenvectors = std::move(es.eigenvectors);
  return sys;
}

ComplexMatrix ApparatusModel::free_propagator(double t) const {
  return shifted_free_propagator(t, 0.0);
}

ComplexMatrix ApparatusModel::shifted_free_propagator(double t, double shift) const {
  const std::size_t n = n_points;
  std::vector<cdouble> d(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double pk = p_grid[k];
    const double energy = is_free_static() ? 0.0 : pk * pk / (2.0 * mass_parameter);
    d[k] = std::exp(cdouble{0.0, -(t * energy + shift * pk)});
  }
  // F^dag * diag(d) * F
  const ComplexMatrix fadj = fourier.adjoint();
  ComplexMatrix w(n, n);
  kernels::rowwise_mul(w.data(), fadj.data(), d.data(), n, n);
  return w * fourier;
}

ApparatusModel build_apparatus(std::size_t n_points, double dq, double mass_parameter,
                               const Tolerances& tol) {
  if (n_points < 16 || (n_points & (n_points - 1)) != 0)
    throw DimensionError("apparatus n_points must be a power of two >= 16");
  if (!(dq > 0.0)) throw DimensionError("apparatus dq must be positive");
  if (!(mass_parameter > 0.0))
    throw DimensionError("apparatus mass_parameter must be positive (or +inf for H_A = 0)");

  ApparatusModel app;
  app.n_points = n_points;
  app.dq = dq;
  app.mass_parameter = mass_parameter;

  const double length = static_cast<double>(n_points) * dq;
  app.q_grid.resize(n_points);
  for (std::size_t j = 0; j < n_points; ++j)
    app.q_grid[j] = (static_cast<double>(j) - static_cast<double>(n_points) / 2.0) * dq;

  app.p_grid.resize(n_points);
  const double dp = 2.0 * std::numbers::pi / length;
  for (std::size_t k = 0; k < n_points; ++k) {
    const double fk = (k < n_points / 2) ? static_cast<double>(k)
                                         : static_cast<double>(k) - static_cast<double>(n_points);
    app.p_grid[k] = dp * fk;
  }

  // Unitary DFT against the centered lattice: F(k,j) = exp(-i p_k q_j)/sqrt(N)
  const double root = 1.0 / std::sqrt(static_cast<double>(n_points));
  app.fourier = ComplexMatrix(n_points, n_points);
  for (std::size_t k = 0; k < n_points; ++k)
    for (std::size_t j = 0; j < n_points; ++j)
      app.fourier(k, j) = root * std::exp(cdouble{0.0, -app.p_grid[k] * app.q_grid[j]});

  app.q = HermitianOperator(ComplexMatrix::diagonal_real(app.q_grid), tol);

  const ComplexMatrix fadj = app.fourier.adjoint();
  auto conjugate_diag = [&](const std::vector<double>& diag) {
    std::vector<cdouble> d(diag.begin(), diag.end());
    ComplexMatrix w(n_points, n_points);
    kernels::rowwise_mul(w.data(), fadj.data(), d.data(), n_points, n_points);
    return w * app.fourier;
  };

  app.p = HermitianOperator(conjugate_diag(app.p_grid), tol);

  if (std::isfinite(mass_parameter)) {
    std::vector<double> kinetic(n_points);
    for (std::size_t k = 0; k < n_points; ++k)
      kinetic[k] = app.p_grid[k] * app.p_grid[k] / (2.0 * mass_parameter);
    app.h_a = HermitianOperator(conjugate_diag(kinetic), tol);
  } else {
    app.h_a = HermitianOperator(ComplexMatrix(n_points, n_points), tol);
  }

  // Certify [H_A, P] = 0 (relative to the exact diagonal-grid norms).
  const double p_norm = *std::max_element(app.p_grid.begin(), app.p_grid.end(),
                                          [](double a, double b) { return std::abs(a) < std::abs(b); });
  const double ha_norm = std::isfinite(mass_parameter)
                             ? std::abs(p_norm) * std::abs(p_norm) / (2.0 * mass_parameter)
                             : 0.0;
  if (ha_norm > 0.0) {
    const ComplexMatrix comm = app.h_a.matrix() * app.p.matrix() - app.p.matrix() * app.h_a.matrix();
    const double comm_norm = operator_norm(comm);
    if (comm_norm > tol.commutation * ha_norm * std::abs(p_norm)) {
      std::ostringstream os;
      os << "apparatus violates [H_A, P] = 0: norm " << comm_norm;
      throw NumericalError(os.str());
    }
  }
  return app;
}

void validate_switch(const SwitchProfile& sw) {
  if (!(sw.tau > 0.0)) throw DimensionError("switch tau must be positive");
  if (sw.kind == SwitchProfile::Kind::smooth_ramp &&
      !(sw.ramp_fraction > 0.0 && sw.ramp_fraction <= 0.2))
    throw DimensionError("switch ramp_fraction must lie in (0, 0.2]");
}

double g_of_t(const SwitchProfile& sw, double t) {
  if (t < 0.0 || t > sw.tau) return 0.0;
  if (sw.kind == SwitchProfile::Kind::ideal_constant) return 1.0 / sw.tau;
  const double r = sw.ramp_fraction;
  const double plateau = 1.0 / (sw.tau * (1.0 - r));
  // evaluate through min(t, tau-t) so mirrored slices get bit-identical g
  const double tm = std::min(t, sw.tau - t);
  if (tm >= r * sw.tau) return plateau;
  const double s = std::sin(std::numbers::pi * tm / (2.0 * r * sw.tau));
  return plateau * s * s;
}

double switch_integral(const SwitchProfile& sw) {
  if (sw.kind == SwitchProfile::Kind::ideal_constant) return sw.tau * (1.0 / sw.tau);
  // two sin^2 half-ramps integrate to plateau * r*tau / 2 each
  const double r = sw.ramp_fraction;
  const double plateau = 1.0 / (sw.tau * (1.0 - r));
  return plateau * ((1.0 - 2.0 * r) * sw.tau + r * sw.tau);
}

void validate_setup(const MeasurementSetup& setup) {
  if (setup.observable.dim() != setup.system.dim()) {
    std::ostringstream os;
    os << "observable dimension " << setup.observable.dim()
       << " does not match system dimension " << setup.system.dim();
    throw DimensionError(os.str());
  }
  validate_switch(setup.sw);
  if (setup.slicing.n_steps < 1) throw DimensionError("slicing n_steps must be >= 1");
  if (setup.dim_joint() > setup.tol.max_joint_dim) {
    std::ostringstream os;
    os << "joint dimension " << setup.dim_joint() << " exceeds the configured cap "
       << setup.tol.max_joint_dim;
    throw CapacityError(os.str());
  }
}

ComplexMatrix embed_system(const ComplexMatrix& op_s, std::size_t dim_apparatus,
                           const Tolerances& tol) {
  return tensor_product(op_s, ComplexMatrix::identity(dim_apparatus), tol);
}

ComplexMatrix embed_apparatus(const ComplexMatrix& op_a, std::size_t dim_system,
                              const Tolerances& tol) {
  return tensor_product(ComplexMatrix::identity(dim_system), op_a, tol);
}

HermitianOperator total_hamiltonian(const MeasurementSetup& setup, double t) {
  validate_setup(setup);
  ComplexMatrix h = embed_system(setup.system.h.matrix(), setup.dim_apparatus(), setup.tol);
  h += embed_apparatus(setup.apparatus.h_a.matrix(), setup.dim_system(), setup.tol);
  const double g = g_of_t(setup.sw, t);
  if (g != 0.0) {
    ComplexMatrix coupling =
        tensor_product(setup.observable.matrix(), setup.apparatus.p.matrix(), setup.tol);
    kernels::axpy(h.data(), cdouble{g, 0.0}, coupling.data(), h.size());
  }
  return HermitianOperator(std::move(h), setup.tol);
}

}  // namespace pmlab
