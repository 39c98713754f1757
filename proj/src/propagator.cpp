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

#include "pmlab/propagator.hpp"

#include <cstring>
#include <map>
#include <sstream>

namespace pmlab {

namespace {

/// Generator tau*(H_S x 1 + 1 x H_A) + w*(O x P); the ideal-profile
/// propagator is exp(-i * generator(tau, 1)).
ComplexMatrix joint_generator(const MeasurementSetup& setup, double tau, double coupling_weight,
                              const ComplexMatrix& coupling) {
  ComplexMatrix h = embed_system(setup.system.h.matrix(), setup.dim_apparatus(), setup.tol);
  h += embed_apparatus(setup.apparatus.h_a.matrix(), setup.dim_system(), setup.tol);
  kernels::scale(h.data(), cdouble{tau, 0.0}, h.size());
  if (coupling_weight != 0.0)
    kernels::axpy(h.data(), cdouble{coupling_weight, 0.0}, coupling.data(), h.size());
  return h;
}

}  // namespace

ComplexMatrix evolve_sliced(const MeasurementSetup& setup, std::size_t n_steps) {
  validate_setup(setup);
  const double tau = setup.sw.tau;
  const double dt = tau / static_cast<double>(n_steps);
  const ComplexMatrix coupling =
      tensor_product(setup.observable.matrix(), setup.apparatus.p.matrix(), setup.tol);

  // Slices with equal g share one exponential: the plateau collapses to a
  // single entry and the cosine ramps mirror onto each other (g is evaluated
  // through min(t, tau-t), so mirrored values are bit-identical).
  std::map<double, ComplexMatrix> cache;
  ComplexMatrix u = ComplexMatrix::identity(setup.dim_joint());
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t_mid = (static_cast<double>(k) + 0.5) * dt;
    const double g = g_of_t(setup.sw, t_mid);
    auto it = cache.find(g);
    if (it == cache.end()) {
      const ComplexMatrix gen = joint_generator(setup, 1.0, g, coupling);
      ComplexMatrix step = expm_hermitian(HermitianOperator(gen, setup.tol), cdouble{0.0, -dt});
      it = cache.emplace(g, std::move(step)).first;
    }
    u = it->second * u;  // later slices act after earlier ones
  }
  return u;
}

ComplexMatrix evolve_exact(const MeasurementSetup& setup, double* slicing_defect_out) {
  validate_setup(setup);
  if (slicing_defect_out) *slicing_defect_out = 0.0;

  if (setup.sw.kind == SwitchProfile::Kind::ideal_constant) {
    // H_tot commutes with itself across the plateau; the whole interval is
    // one exponential of tau*(H_S + H_A) + O x P (the unit-integral switch
    // leaves exactly weight one on the coupling).
    const ComplexMatrix coupling =
        tensor_product(setup.observable.matrix(), setup.apparatus.p.matrix(), setup.tol);
    const ComplexMatrix gen = joint_generator(setup, setup.sw.tau, 1.0, coupling);
    return expm_from_eigh(eigh(HermitianOperator(gen, setup.tol)), cdouble{0.0, -1.0});
  }

  const std::size_t n = setup.slicing.n_steps;
  ComplexMatrix coarse = evolve_sliced(setup, n);
  ComplexMatrix fine = evolve_sliced(setup, 2 * n);
  const double defect = operator_norm(fine - coarse);
  if (slicing_defect_out) *slicing_defect_out = defect;
  if (defect > setup.tol.slicing) {
    std::ostringstream os;
    os << "time slicing did not converge: doubling defect " << defect << " exceeds "
       << setup.tol.slicing << " at n_steps=" << n;
    throw AccuracyError(defect, os.str());
  }
  return fine;
}

HermitianOperator sandwich_observable(const SystemHamiltonian& system, const HermitianOperator& o,
                                      const Tolerances& tol) {
  if (o.dim() != system.dim())
    throw DimensionError("sandwich_observable: observable/system dimension mismatch");
  const std::size_t n = system.dim();
  const ComplexMatrix& v = system.eigenvectors;
  // diag entries of V^dag O V are the only parts that survive sum_n P_n O P_n
  const ComplexMatrix ov = o.matrix() * v;
  std::vector<cdouble> diag(n);
  for (std::size_t j = 0; j < n; ++j) {
    cdouble s{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) s += std::conj(v(i, j)) * ov(i, j);
    diag[j] = cdouble{s.real(), 0.0};  // Hermitian O has real diagonal there
  }
  ComplexMatrix w(n, n);
  kernels::rowwise_mul(w.data(), v.data(), diag.data(), n, n);
  HermitianOperator otilde(w * v.adjoint(), tol);

  const ComplexMatrix comm =
      otilde.matrix() * system.h.matrix() - system.h.matrix() * otilde.matrix();
  const double comm_norm = comm.max_abs();
  if (comm_norm > tol.commutation) {
    std::ostringstream os;
    os << "sandwiched observable fails [Otilde, H_S] = 0: max entry " << comm_norm;
    throw NumericalError(os.str());
  }
  return otilde;
}

ComplexMatrix build_u_app(const MeasurementSetup& setup) {
  validate_setup(setup);
  const HermitianOperator otilde = sandwich_observable(setup.system, setup.observable, setup.tol);
  const ComplexMatrix coupling =
      tensor_product(otilde.matrix(), setup.apparatus.p.matrix(), setup.tol);
  const ComplexMatrix gen = joint_generator(setup, setup.sw.tau, 1.0, coupling);
  return expm_from_eigh(eigh(HermitianOperator(gen, setup.tol)), cdouble{0.0, -1.0});
}

double conservation_defect_of(const MeasurementSetup& setup, const ComplexMatrix& u) {
  const ComplexMatrix hs = embed_system(setup.system.h.matrix(), setup.dim_apparatus(), setup.tol);
  return operator_norm(u.adjoint() * hs * u - hs);
}

PropagatorPair compare_propagators(const MeasurementSetup& setup) {
  PropagatorPair pair;
  pair.u_exact = evolve_exact(setup, &pair.slicing_defect);
  pair.u_app = build_u_app(setup);
  pair.norm_diff = operator_norm(pair.u_exact - pair.u_app);
  pair.conservation_defect = conservation_defect_of(setup, pair.u_exact);
  return pair;
}

std::vector<double> slicing_deltas(const MeasurementSetup& setup, std::size_t n0,
                                   std::size_t levels) {
  std::vector<double> deltas;
  ComplexMatrix prev = evolve_sliced(setup, n0);
  for (std::size_t l = 1; l <= levels; ++l) {
    ComplexMatrix next = evolve_sliced(setup, n0 << l);
    deltas.push_back(operator_norm(next - prev));
    prev = std::move(next);
  }
  return deltas;
}

double unitarity_defect(const ComplexMatrix& u) {
  const ComplexMatrix gram = u.adjoint() * u;
  const ComplexMatrix eye = ComplexMatrix::identity(u.rows());
  return kernels::max_abs_diff(gram.data(), eye.data(), gram.size());
}

}  // namespace pmlab
