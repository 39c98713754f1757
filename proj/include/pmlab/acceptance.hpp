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
 * The built-in verification suite: eleven numbered criteria covering
 * protection fidelity, exact conservation, the sandwich identities, the
 * commuting/noncommuting dichotomy, the 1/tau scaling of the instantaneous
 * commutator, superposition entanglement, the two-box scenario, phase
 * blindness, tomography, retuning, and numerics hygiene. Tolerances are
 * pinned in code; `pmlab verify` and the acceptance test binary both run
 * this list and print one line per criterion.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pmlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 20260809ULL);

/// "[PASS] 03 sandwich_identities (0.12s) detail..."
std::string format_criterion_line(const CriterionResult& r);

}  // namespace pmlab
