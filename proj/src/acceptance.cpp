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

#include "pmlab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "pmlab/scenarios.hpp"

namespace pmlab {

namespace {

using Clock = std::chrono::steady_clock;

ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix pauli_y() {
  return ComplexMatrix::from_rows({{0.0, cdouble{0.0, -1.0}}, {cdouble{0.0, 1.0}, 0.0}});
}
ComplexMatrix pauli_z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }

/// Reference qubit family: H_S = diag(0, 1) with the n=256, dq=0.125,
/// M = 1000 pointer.
struct Reference {
  SystemHamiltonian qubit;
  ApparatusModel pointer_a;   // n=256, dq=0.125, M=1e3
  ApparatusModel pointer_b;   // n=64,  dq=0.25,  M=1e3 (slicing studies)
  PointerPreparation prep{0.0, 0.5, 0.0};

  Reference() {
    qubit = build_system(HermitianOperator(ComplexMatrix::diagonal_real({0.0, 1.0})));
    pointer_a = build_apparatus(256, 0.125, 1000.0);
    pointer_b = build_apparatus(64, 0.25, 1000.0);
  }

  MeasurementSetup setup(const ComplexMatrix& observable, double tau,
                         bool small_pointer = false,
                         SwitchProfile::Kind kind = SwitchProfile::Kind::ideal_constant) const {
    MeasurementSetup s;
    s.system = qubit;
    s.apparatus = small_pointer ? pointer_b : pointer_a;
    s.observable = HermitianOperator(observable);
    s.sw = SwitchProfile{kind, tau, 0.1};
    s.slicing = TimeSlicing{256};
    return s;
  }
};

HermitianOperator random_hermitian(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, i) = normal(rng);
    for (std::size_t j = i + 1; j < dim; ++j) {
      const cdouble z{normal(rng), normal(rng)};
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return HermitianOperator(std::move(m));
}

struct Runner {
  std::vector<CriterionResult> results;

  void run(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    const auto t0 = Clock::now();
    try {
      auto [pass, detail] = fn();
      r.pass = pass;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    results.push_back(std::move(r));
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  const auto suite_start = Clock::now();
  Reference ref;
  Runner runner;

  const std::vector<double> tau_grid{10.0, 30.0, 100.0, 300.0, 1000.0};
  ConvergenceTable table_x, table_z;  // shared between criteria 4 and 5
  double max_unitarity_defect = 0.0;  // fed into criterion 11

  // 1. Protection of energy eigenstates with a commuting observable.
  runner.run(1, "protective_fidelity", [&]() -> std::pair<bool, std::string> {
    const MeasurementSetup setup = ref.setup(pauli_z(), 100.0);
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t n = 0; n < 2; ++n) {
      const StateVector phi = ref.qubit.eigenstate(n);
      const RunRecord rec = run_protective(setup, phi, ref.prep);
      const double expect = expectation(setup.observable, phi).real();
      const double shift_err = std::abs(rec.pointer_shift - expect);
      pass = pass && rec.system_fidelity >= 1.0 - 1e-8 && shift_err <= 1e-6 &&
             rec.entropy <= 1e-8;
      detail << "n=" << n + 1 << ": fidelity=" << rec.system_fidelity
             << " shift_err=" << fmt(shift_err) << " entropy=" << fmt(rec.entropy) << "; ";
    }
    return {pass, detail.str()};
  });

  // 2. Exact conservation of H_S under U_app for every shipped scenario.
  runner.run(2, "exact_conservation", [&]() -> std::pair<bool, std::string> {
    std::vector<std::pair<std::string, MeasurementSetup>> setups;
    setups.emplace_back("qubit_commuting", ref.setup(pauli_z(), 1000.0));
    setups.emplace_back("qubit_noncommuting", ref.setup(pauli_x(), 1000.0));
    setups.emplace_back("qubit_y", ref.setup(pauli_y(), 1000.0));
    setups.emplace_back("qubit_ramp", ref.setup(pauli_x(), 10.0, true,
                                                SwitchProfile::Kind::smooth_ramp));
    {
      const TwoBoxModel model = make_two_box(0.5);
      MeasurementSetup s;
      s.system = model.system;
      s.apparatus = ref.pointer_a;
      s.observable = model.o_box;
      s.sw = SwitchProfile{SwitchProfile::Kind::ideal_constant, 1000.0, 0.1};
      setups.emplace_back("two_box", std::move(s));
    }
    {
      MeasurementSetup s = ref.setup(ComplexMatrix::diagonal_real({2.0, -2.0}), 1000.0);
      s.apparatus = build_apparatus(256, 0.125, 1e5);
      setups.emplace_back("superposition", std::move(s));
    }
    bool pass = true;
    double worst = 0.0;
    std::string worst_name;
    for (const auto& [name, s] : setups) {
      const ComplexMatrix u_app = build_u_app(s);
      max_unitarity_defect = std::max(max_unitarity_defect, unitarity_defect(u_app));
      const double defect = conservation_defect_of(s, u_app);
      if (defect > worst) {
        worst = defect;
        worst_name = name;
      }
      pass = pass && defect <= 1e-10;
    }
    return {pass, "worst defect " + fmt(worst) + " (" + worst_name + ") over " +
                      std::to_string(setups.size()) + " setups, tol 1e-10"};
  });

  // 3. Sandwich identities on seeded random (H_S, O) pairs at dims 2-5.
  runner.run(3, "sandwich_identities", [&]() -> std::pair<bool, std::string> {
    std::mt19937_64 rng(seed);
    double worst_comm = 0.0, worst_diag = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t dim = 2 + static_cast<std::size_t>(trial % 4);
      SystemHamiltonian system;
      for (int attempt = 0;; ++attempt) {
        try {
          system = build_system(random_hermitian(rng, dim));
          break;
        } catch (const DegenerateSpectrumError&) {
          if (attempt > 32) throw;
        }
      }
      const HermitianOperator o = random_hermitian(rng, dim);
      const HermitianOperator otilde = sandwich_observable(system, o);
      worst_comm = std::max(worst_comm, commutator_norm(otilde, system.h));
      for (std::size_t n = 0; n < dim; ++n) {
        const StateVector phi = system.eigenstate(n);
        const double diff =
            std::abs(expectation(otilde, phi).real() - expectation(o, phi).real());
        worst_diag = std::max(worst_diag, diff);
      }
    }
    const bool pass = worst_comm <= 1e-10 && worst_diag <= 1e-12;
    return {pass, "100 pairs: worst |[Otilde,H_S]| = " + fmt(worst_comm) +
                      " (tol 1e-10), worst diagonal mismatch = " + fmt(worst_diag) +
                      " (tol 1e-12)"};
  });

  // 4. The dichotomy: noncommuting O keeps |U - U_app| >= 0.1 on the grid,
  //    commuting O collapses it below 1e-8; conservation mirrors both.
  runner.run(4, "theorem_contrapositive", [&]() -> std::pair<bool, std::string> {
    table_x = conservation_scan(ref.setup(pauli_x(), 10.0), tau_grid);
    table_z = conservation_scan(ref.setup(pauli_z(), 10.0), tau_grid);
    double min_x = 1e300, max_z = 0.0, min_cons_x = 1e300, max_cons_z = 0.0;
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
      min_x = std::min(min_x, table_x.norm_diff[i]);
      max_z = std::max(max_z, table_z.norm_diff[i]);
      min_cons_x = std::min(min_cons_x, table_x.conservation_defect[i]);
      max_cons_z = std::max(max_cons_z, table_z.conservation_defect[i]);
    }
    const bool pass = min_x >= 0.1 && max_z <= 1e-8 && min_cons_x >= 1e-5 && max_cons_z <= 1e-8;
    return {pass, "sigma_x: min norm_diff " + fmt(min_x) + " (>=0.1), min conservation " +
                      fmt(min_cons_x) + " (>=1e-5); sigma_z: max norm_diff " + fmt(max_z) +
                      ", max conservation " + fmt(max_cons_z) + " (<=1e-8)"};
  });

  // 5. The differential-form commutator falls off like 1/tau even though the
  //    propagators stay apart (same grid as criterion 4).
  runner.run(5, "differential_scaling", [&]() -> std::pair<bool, std::string> {
    std::vector<double> values;
    MeasurementSetup s = ref.setup(pauli_x(), 10.0);
    for (double tau : tau_grid) {
      s.sw.tau = tau;
      values.push_back(instantaneous_commutator_norm(s, tau / 2.0));
    }
    const double slope = fit_loglog_slope(tau_grid, values);
    double min_norm_diff = 1e300;
    for (double v : table_x.norm_diff) min_norm_diff = std::min(min_norm_diff, v);
    const bool pass = std::abs(slope + 1.0) <= 0.1 && min_norm_diff >= 0.1;
    return {pass, "fitted slope " + fmt(slope) + " (target -1 +- 0.1) while norm_diff stays >= " +
                      fmt(min_norm_diff)};
  });

  // 6. Superposed eigenstates with distinct <O>_n entangle with the pointer.
  runner.run(6, "superposition_entanglement", [&]() -> std::pair<bool, std::string> {
    MeasurementSetup s = ref.setup(ComplexMatrix::diagonal_real({2.0, -2.0}), 1000.0);
    s.apparatus = build_apparatus(256, 0.125, 1e5);  // negligible packet spreading
    const StateVector input = StateVector::normalized(
        {cdouble{1.0, 0.0}, cdouble{1.0, 0.0}});
    const RunRecord rec = run_protective(s, input, ref.prep);
    const bool pass = rec.entropy >= 0.5;
    return {pass, "entropy " + fmt(rec.entropy) + " nats (>= 0.5) at tau=1e3, <O> gap 4 = 8 sigma"};
  });

  // 7. Two-box scenario: null sandwiched observable, null protective shifts,
  //    bimodal impulsive record.
  runner.run(7, "two_box", [&]() -> std::pair<bool, std::string> {
    const ScenarioReport report = scenario_two_box(0.5, {10.0, 100.0, 1000.0});
    bool otilde = false, plus = false, left = false, vn = false;
    std::ostringstream detail;
    for (const Verdict& v : report.verdicts) {
      if (v.id == "otilde_zero") otilde = v.pass;
      if (v.id == "protective_plus_shift") plus = v.pass;
      if (v.id == "protective_left_shift") left = v.pass;
      if (v.id == "vn_bimodal_weights") vn = v.pass;
      detail << v.id << "=" << fmt(v.measured) << " ";
    }
    return {otilde && plus && left && vn, detail.str()};
  });

  // 8. Phase blindness: superpositions and their diagonal mixtures leave the
  //    same apparatus marginal.
  runner.run(8, "phase_blindness", [&]() -> std::pair<bool, std::string> {
    const MeasurementSetup s = ref.setup(pauli_z(), 100.0);
    const ComplexMatrix u = evolve_exact(s);
    max_unitarity_defect = std::max(max_unitarity_defect, unitarity_defect(u));
    const StateVector chi = prepare_packet(s.apparatus, ref.prep);
    const std::size_t ds = 2, da = s.dim_apparatus();

    std::vector<ComplexMatrix> eigen_marginals;
    for (std::size_t n = 0; n < 2; ++n) {
      const StateVector joint = tensor_product(ref.qubit.eigenstate(n), chi);
      eigen_marginals.push_back(
          reduced_density(apply(u, joint), ds, da, Factor::apparatus));
    }

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const double theta = std::acos(1.0 - 2.0 * uniform(rng));
      const double phase = 2.0 * std::numbers::pi * uniform(rng);
      const cdouble c1{std::cos(theta / 2.0), 0.0};
      const cdouble c2 = std::sin(theta / 2.0) * std::exp(cdouble{0.0, phase});
      const StateVector input = StateVector::normalized({c1, c2});
      const StateVector joint = tensor_product(input, chi);
      const ComplexMatrix sup_marginal =
          reduced_density(apply(u, joint), ds, da, Factor::apparatus);
      ComplexMatrix mix = eigen_marginals[0];
      kernels::scale(mix.data(), cdouble{std::norm(c1), 0.0}, mix.size());
      kernels::axpy(mix.data(), cdouble{std::norm(c2), 0.0}, eigen_marginals[1].data(),
                    mix.size());
      worst = std::max(worst, trace_distance(sup_marginal, mix));
    }
    return {worst <= 1e-6, "20 seeded superpositions: worst trace distance " + fmt(worst) +
                               " (tol 1e-6)"};
  });

  // 9. Tomography: three sequential protective runs reconstruct the state.
  runner.run(9, "tomography", [&]() -> std::pair<bool, std::string> {
    std::vector<HermitianOperator> observables{
        HermitianOperator(pauli_x()), HermitianOperator(pauli_y()), HermitianOperator(pauli_z())};
    const ScenarioReport report = scenario_tomography(ref.qubit, 0, observables, 1000.0);
    bool pass = false;
    std::ostringstream detail;
    for (const Verdict& v : report.verdicts) {
      if (v.id == "reconstruction_fidelity") pass = v.measured >= 1.0 - 1e-3;
      detail << v.id << "=" << fmt(v.measured) << " ";
    }
    return {pass, detail.str()};
  });

  // 10. Retuning between contexts: slow ramps track, sudden switches reduce
  //     to the static overlap.
  runner.run(10, "adiabatic_retune", [&]() -> std::pair<bool, std::string> {
    const SystemHamiltonian start = build_system(HermitianOperator(pauli_z()));
    const SystemHamiltonian end = build_system(HermitianOperator(pauli_x()));
    // minimum path gap sqrt(2) => gap^2 = 2, ramp_time = 100/gap^2 = 50
    const ScenarioReport report = scenario_adiabatic_retune(start, end, 4000, 50.0, 0);
    bool slow = false, sudden = false;
    std::ostringstream detail;
    for (const Verdict& v : report.verdicts) {
      if (v.id == "slow_tracking_fidelity") slow = v.measured >= 0.99;
      if (v.id == "sudden_equals_static_overlap") sudden = v.pass;
      detail << v.id << "=" << fmt(v.measured) << " ";
    }
    return {slow && sudden, detail.str()};
  });

  // 11. Numerics hygiene: second-order slicing, unitary propagators, and the
  //     whole suite inside its time budget.
  runner.run(11, "numerics_hygiene", [&]() -> std::pair<bool, std::string> {
    const MeasurementSetup s =
        ref.setup(pauli_x(), 10.0, true, SwitchProfile::Kind::smooth_ramp);
    const std::vector<double> deltas = slicing_deltas(s, 64, 3);
    const double ratio = deltas[0] / deltas[1];
    const double ratio2 = deltas[1] / deltas[2];

    const ComplexMatrix u = evolve_sliced(s, 256);
    max_unitarity_defect = std::max(max_unitarity_defect, unitarity_defect(u));
    {
      const PropagatorPair pair = compare_propagators(ref.setup(pauli_x(), 1000.0));
      max_unitarity_defect = std::max(max_unitarity_defect, unitarity_defect(pair.u_exact));
      max_unitarity_defect = std::max(max_unitarity_defect, unitarity_defect(pair.u_app));
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - suite_start).count();
    const bool pass = std::abs(ratio - 4.0) <= 0.5 && max_unitarity_defect <= 1e-8 &&
                      elapsed < 300.0;
    return {pass, "doubling ratios " + fmt(ratio) + ", " + fmt(ratio2) +
                      " (target 4 +- 0.5); max unitarity defect " + fmt(max_unitarity_defect) +
                      " (tol 1e-8); elapsed " + fmt(elapsed) + "s (< 300s)"};
  });

  return runner.results;
}

std::string format_criterion_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "[PASS] " : "[FAIL] ");
  os.fill('0');
  os.width(2);
  os << r.id;
  os << " " << r.name << " (" << fmt(r.seconds) << "s)";
  if (!r.detail.empty()) os << " " << r.detail;
  return os.str();
}

}  // namespace pmlab
