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

#include "pmlab/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace pmlab {

namespace {

void validate_grid(const std::vector<double>& tau_grid) {
  if (tau_grid.size() < 4) throw DimensionError("tau grid needs at least 4 points");
  for (std::size_t i = 0; i + 1 < tau_grid.size(); ++i)
    if (!(tau_grid[i] < tau_grid[i + 1])) throw DimensionError("tau grid must ascend");
  if (!(tau_grid.front() > 0.0)) throw DimensionError("tau grid must be positive");
}

void append_csv_value(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string ConvergenceTable::to_csv() const {
  const std::size_t n = tau_grid.size();
  if (norm_diff.size() != n || conservation_defect.size() != n ||
      matrix_element_defect.size() != n)
    throw DimensionError("ConvergenceTable columns must have equal length");
  std::string out = "tau,norm_diff,conservation_defect,matrix_element_defect\n";
  for (std::size_t i = 0; i < n; ++i) {
    append_csv_value(out, tau_grid[i]);
    out += ',';
    append_csv_value(out, norm_diff[i]);
    out += ',';
    append_csv_value(out, conservation_defect[i]);
    out += ',';
    append_csv_value(out, matrix_element_defect[i]);
    out += '\n';
  }
  return out;
}

double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("commutator_norm: dimension mismatch");
  return operator_norm(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

ConvergenceTable conservation_scan(const MeasurementSetup& setup,
                                   const std::vector<double>& tau_grid) {
  validate_grid(tau_grid);
  ConvergenceTable table;
  for (double tau : tau_grid) {
    MeasurementSetup s = setup;
    s.sw.tau = tau;
    const PropagatorPair pair = compare_propagators(s);
    table.tau_grid.push_back(tau);
    table.norm_diff.push_back(pair.norm_diff);
    table.conservation_defect.push_back(pair.conservation_defect);
    table.matrix_element_defect.push_back(0.0);
  }
  return table;
}

ConvergenceTable matrix_element_scan(const MeasurementSetup& setup, const StateVector& chi,
                                     const std::vector<double>& tau_grid) {
  validate_grid(tau_grid);
  if (chi.dim() != setup.dim_apparatus())
    throw DimensionError("matrix_element_scan: chi does not live on the apparatus");

  const std::size_t ds = setup.dim_system();
  ConvergenceTable table;
  for (double tau : tau_grid) {
    MeasurementSetup s = setup;
    s.sw.tau = tau;
    const PropagatorPair pair = compare_propagators(s);

    // columns psi_n = U (phi_n (x) chi), elements psi_m^dag (H_S x 1) psi_n
    const ComplexMatrix hs = embed_system(s.system.h.matrix(), s.dim_apparatus(), s.tol);
    std::vector<std::vector<cdouble>> evolved(ds), weighted(ds);
    for (std::size_t n = 0; n < ds; ++n) {
      const StateVector joint =
          tensor_product(s.system.eigenstate(n), chi, s.tol);
      evolved[n] = apply(pair.u_exact, joint.amplitudes());
      weighted[n] = apply(hs, evolved[n]);
    }

    double max_dev = 0.0;
    for (std::size_t m = 0; m < ds; ++m)
      for (std::size_t n = 0; n < ds; ++n) {
        const cdouble elem =
            kernels::dotc(evolved[m].data(), weighted[n].data(), evolved[m].size());
        const cdouble target = (m == n) ? cdouble{s.system.eigenvalues[n], 0.0} : cdouble{0.0, 0.0};
        const double dev = std::abs(elem - target);
        max_dev = std::max(max_dev, dev);
        // operator norm majorizes matrix elements of U^dag H_S U - H_S; the
        // slicing defect covers the difference between the two slicings
        const double bound = pair.conservation_defect + pair.slicing_defect * 4.0 + 1e-9;
        if (dev > bound) {
          std::ostringstream os;
          os << "matrix-element deviation " << dev << " exceeds majorization bound " << bound
             << " at (m,n)=(" << m << "," << n << "), tau=" << tau;
          throw NumericalError(os.str());
        }
      }

    table.tau_grid.push_back(tau);
    table.norm_diff.push_back(pair.norm_diff);
    table.conservation_defect.push_back(pair.conservation_defect);
    table.matrix_element_defect.push_back(max_dev);
  }
  return table;
}

double p_resolved_check(const SystemHamiltonian& system, const HermitianOperator& o,
                        const std::vector<double>& p_grid, double tau) {
  if (o.dim() != system.dim()) throw DimensionError("p_resolved_check: dimension mismatch");
  const std::size_t d = system.dim();
  double max_dev = 0.0;
  for (double p : p_grid) {
    ComplexMatrix gen = o.matrix();
    kernels::scale(gen.data(), cdouble{p, 0.0}, gen.size());
    kernels::axpy(gen.data(), cdouble{tau, 0.0}, system.h.matrix().data(), gen.size());
    const EighResult es = eigh(HermitianOperator(std::move(gen)));
    const ComplexMatrix u = expm_from_eigh(es, cdouble{0.0, -1.0});
    const ComplexMatrix conj = u.adjoint() * system.h.matrix() * u;
    for (std::size_t m = 0; m < d; ++m)
      for (std::size_t n = 0; n < d; ++n) {
        cdouble elem{0.0, 0.0};
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j)
            elem += std::conj(system.eigenvectors(i, m)) * conj(i, j) * system.eigenvectors(j, n);
        const cdouble target = (m == n) ? cdouble{system.eigenvalues[n], 0.0} : cdouble{0.0, 0.0};
        max_dev = std::max(max_dev, std::abs(elem - target));
      }
  }
  return max_dev;
}

double instantaneous_commutator_norm(const MeasurementSetup& setup, double t) {
  const ComplexMatrix comm = setup.observable.matrix() * setup.system.h.matrix() -
                             setup.system.h.matrix() * setup.observable.matrix();
  const ComplexMatrix joint = tensor_product(comm, setup.apparatus.p.matrix(), setup.tol);
  return g_of_t(setup.sw, t) * operator_norm(joint);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DimensionError("fit_loglog_slope needs matched series with >= 2 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw NumericalError("fit_loglog_slope requires positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> default_p_grid(const ApparatusModel& apparatus, std::size_t count) {
  double pmax = 0.0;
  for (double p : apparatus.p_grid) pmax = std::max(pmax, std::abs(p));
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
    grid[i] = -pmax + 2.0 * pmax * frac;
  }
  return grid;
}

}  // namespace pmlab
