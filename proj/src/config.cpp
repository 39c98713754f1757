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

#include "pmlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

namespace pmlab {

std::string ConfigIssue::format() const {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ", col " << col << ": ";
  if (!path.empty()) os << path << ": ";
  os << message;
  return os.str();
}

std::string ConfigError::join(const std::vector<ConfigIssue>& issues) {
  std::ostringstream os;
  os << "config invalid (" << issues.size() << " issue" << (issues.size() == 1 ? "" : "s") << ")";
  for (const ConfigIssue& i : issues) os << "\n  " << i.format();
  return os.str();
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(join(issues)), issues_(std::move(issues)) {}

namespace {

// ---- raw tree ----

struct RawBlock;

struct RawEntry {
  std::string key;
  std::size_t line = 0;
  std::size_t col = 0;
  std::vector<std::string> values;   // leaf
  std::unique_ptr<RawBlock> block;   // nested
  bool is_block() const { return block != nullptr; }
};

struct RawBlock {
  std::vector<RawEntry> entries;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

RawBlock parse_raw(const std::string& text, std::vector<ConfigIssue>& issues) {
  RawBlock root;
  std::vector<RawBlock*> stack{&root};
  std::istringstream in(text);
  std::string raw_line;
  std::size_t lineno = 0;
  while (std::getline(in, raw_line)) {
    ++lineno;
    std::string line = raw_line;
    if (const std::size_t hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::size_t col = first + 1;
    const std::string body = trim(line);

    if (body == "}") {
      if (stack.size() == 1) {
        issues.push_back({lineno, col, "", "unmatched '}'"});
        continue;
      }
      stack.pop_back();
      continue;
    }
    if (body.back() == '{') {
      const std::string key = trim(body.substr(0, body.size() - 1));
      if (key.empty() || key.find_first_of(" \t={}") != std::string::npos) {
        issues.push_back({lineno, col, "", "malformed block header (expected 'name {')"});
        continue;
      }
      RawEntry e;
      e.key = key;
      e.line = lineno;
      e.col = col;
      e.block = std::make_unique<RawBlock>();
      stack.back()->entries.push_back(std::move(e));
      stack.push_back(stack.back()->entries.back().block.get());
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      issues.push_back({lineno, col, "", "expected 'key = value' or 'name {' or '}'"});
      continue;
    }
    RawEntry e;
    e.key = trim(body.substr(0, eq));
    e.line = lineno;
    e.col = col;
    if (e.key.empty() || e.key.find_first_of(" \t{}") != std::string::npos) {
      issues.push_back({lineno, col, "", "malformed key before '='"});
      continue;
    }
    std::istringstream vs(body.substr(eq + 1));
    std::string tok;
    while (vs >> tok) e.values.push_back(tok);
    stack.back()->entries.push_back(std::move(e));
  }
  if (stack.size() != 1)
    issues.push_back({lineno, 1, "", "unclosed block at end of input"});
  return root;
}

// ---- semantic extraction helpers ----

class Reader {
 public:
  Reader(std::vector<ConfigIssue>& issues) : issues_(issues) {}

  void error(const RawEntry& e, const std::string& path, const std::string& msg) {
    issues_.push_back({e.line, e.col, path, msg});
  }
  void error(const std::string& path, const std::string& msg) {
    issues_.push_back({0, 0, path, msg});
  }

  bool parse_double(const RawEntry& e, const std::string& path, double* out,
                    bool allow_inf = false) {
    if (e.values.size() != 1) {
      error(e, path, "expected a single number");
      return false;
    }
    return token_to_double(e, path, e.values[0], out, allow_inf);
  }

  bool token_to_double(const RawEntry& e, const std::string& path, const std::string& tok,
                       double* out, bool allow_inf = false) {
    if (allow_inf && (tok == "inf" || tok == "+inf")) {
      *out = std::numeric_limits<double>::infinity();
      return true;
    }
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(v)) {
      error(e, path, "not a finite number: '" + tok + "'");
      return false;
    }
    *out = v;
    return true;
  }

  bool parse_size(const RawEntry& e, const std::string& path, std::size_t* out) {
    if (e.values.size() != 1) {
      error(e, path, "expected a single nonnegative integer");
      return false;
    }
    const std::string& tok = e.values[0];
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
      error(e, path, "not a nonnegative integer: '" + tok + "'");
      return false;
    }
    *out = static_cast<std::size_t>(std::strtoull(tok.c_str(), nullptr, 10));
    return true;
  }

  bool parse_u64(const RawEntry& e, const std::string& path, std::uint64_t* out) {
    std::size_t v = 0;
    if (!parse_size(e, path, &v)) return false;
    *out = v;
    return true;
  }

  bool parse_string(const RawEntry& e, const std::string& path, std::string* out) {
    if (e.values.size() > 1) {
      error(e, path, "expected a single token");
      return false;
    }
    *out = e.values.empty() ? std::string{} : e.values[0];
    return true;
  }

  bool parse_double_list(const RawEntry& e, const std::string& path, std::vector<double>* out) {
    out->clear();
    for (const std::string& tok : e.values) {
      double v = 0.0;
      if (!token_to_double(e, path, tok, &v)) return false;
      out->push_back(v);
    }
    return true;
  }

  bool parse_complex_list(const RawEntry& e, const std::string& path, std::vector<cdouble>* out) {
    std::vector<double> flat;
    if (!parse_double_list(e, path, &flat)) return false;
    if (flat.size() % 2 != 0) {
      error(e, path, "complex entries need re/im pairs (odd count given)");
      return false;
    }
    out->clear();
    for (std::size_t i = 0; i < flat.size(); i += 2) out->push_back({flat[i], flat[i + 1]});
    return true;
  }

 private:
  std::vector<ConfigIssue>& issues_;
};

/// Walks one block, dispatching keys; unknown or duplicate keys become
/// issues. `repeatable` keys may appear multiple times.
void walk_block(const RawBlock& block, const std::string& path, Reader& r,
                const std::set<std::string>& repeatable,
                const std::function<void(const RawEntry&, const std::string&)>& handle,
                const std::set<std::string>& known) {
  std::set<std::string> seen;
  for (const RawEntry& e : block.entries) {
    const std::string epath = path.empty() ? e.key : path + "." + e.key;
    if (!known.count(e.key)) {
      r.error(e, epath, "unknown key");
      continue;
    }
    if (!repeatable.count(e.key) && !seen.insert(e.key).second) {
      r.error(e, epath, "duplicate key");
      continue;
    }
    handle(e, epath);
  }
}

bool read_matrix_block(const RawBlock& block, const std::string& path, Reader& r,
                       MatrixSpec* out) {
  bool ok = true;
  std::size_t dim = 0;
  bool have_dim = false;
  std::vector<std::vector<cdouble>> rows;
  std::set<std::string> seen;
  for (const RawEntry& e : block.entries) {
    const std::string epath = path + "." + e.key;
    if (e.key == "dim") {
      if (!seen.insert("dim").second) {
        r.error(e, epath, "duplicate key");
        ok = false;
        continue;
      }
      have_dim = r.parse_size(e, epath, &dim);
      ok = ok && have_dim;
    } else if (e.key == "row") {
      std::vector<cdouble> row;
      std::ostringstream rp;
      rp << path << ".row[" << rows.size() << "]";
      if (!r.parse_complex_list(e, rp.str(), &row)) {
        ok = false;
        continue;
      }
      rows.push_back(std::move(row));
    } else {
      r.error(e, epath, "unknown key (matrix blocks take 'dim' and 'row')");
      ok = false;
    }
  }
  if (!have_dim) {
    r.error(path, "matrix block missing 'dim'");
    return false;
  }
  if (rows.size() != dim) {
    std::ostringstream os;
    os << "matrix has " << rows.size() << " rows but dim = " << dim;
    r.error(path, os.str());
    return false;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      std::ostringstream os;
      os << "row has " << rows[i].size() << " complex entries but dim = " << dim;
      std::ostringstream rp;
      rp << path << ".row[" << i << "]";
      r.error(rp.str(), os.str());
      return false;
    }
  }
  if (!ok) return false;
  out->dim = dim;
  out->entries.clear();
  for (const auto& row : rows) out->entries.insert(out->entries.end(), row.begin(), row.end());
  return true;
}

double hermiticity_defect_of(const MatrixSpec& spec) {
  const std::size_t d = spec.dim;
  double defect = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      defect = std::max(defect,
                        std::abs(spec.entries[i * d + j] - std::conj(spec.entries[j * d + i])));
  return defect;
}

void read_system_block(const RawBlock& block, const std::string& path, Reader& r,
                       SystemSpec* out) {
  static const std::set<std::string> known{"builder", "epsilon", "diag", "matrix"};
  walk_block(block, path, r, {}, [&](const RawEntry& e, const std::string& epath) {
    if (e.key == "builder") {
      r.parse_string(e, epath, &out->builder);
      if (!out->builder.empty() && out->builder != "two_box" && out->builder != "diag")
        r.error(e, epath, "unknown builder (expected two_box or diag)");
    } else if (e.key == "epsilon") {
      double v = 0.0;
      if (r.parse_double(e, epath, &v)) out->epsilon = v;
    } else if (e.key == "diag") {
      r.parse_double_list(e, epath, &out->diag);
    } else if (e.key == "matrix") {
      if (!e.is_block()) {
        r.error(e, epath, "matrix must be a block");
        return;
      }
      MatrixSpec spec;
      if (read_matrix_block(*e.block, epath, r, &spec)) out->matrix = std::move(spec);
    }
  }, known);
}

std::size_t system_dim_of(const SystemSpec& spec) {
  if (spec.matrix) return spec.matrix->dim;
  if (spec.builder == "two_box") return 2;
  if (spec.builder == "diag") return spec.diag.size();
  return 0;
}

const std::set<std::string> kScenarioNames{"protective", "von_neumann", "two_box",
                                           "tomography", "adiabatic_retune", "sweep"};

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  std::vector<ConfigIssue> issues;
  const RawBlock root = parse_raw(text, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));  // syntax first

  Reader r(issues);
  ScenarioConfig cfg;

  static const std::set<std::string> top_known{
      "scenario", "seed", "system", "system_end", "apparatus", "observable", "switch",
      "slicing", "pointer", "input", "output", "coupling_strength", "target_index",
      "ramp_steps", "ramp_time"};

  walk_block(root, "", r, {"observable"}, [&](const RawEntry& e, const std::string& path) {
    if (e.key == "scenario") {
      r.parse_string(e, path, &cfg.scenario);
      if (!kScenarioNames.count(cfg.scenario))
        r.error(e, path, "unknown scenario '" + cfg.scenario + "'");
    } else if (e.key == "seed") {
      r.parse_u64(e, path, &cfg.seed);
    } else if (e.key == "system" || e.key == "system_end") {
      if (!e.is_block()) {
        r.error(e, path, "must be a block");
        return;
      }
      read_system_block(*e.block, path, r, e.key == "system" ? &cfg.system : &cfg.system_end);
    } else if (e.key == "apparatus") {
      if (!e.is_block()) {
        r.error(e, path, "must be a block");
        return;
      }
      static const std::set<std::string> known{"n_points", "dq", "mass_parameter"};
      walk_block(*e.block, path, r, {}, [&](const RawEntry& a, const std::string& apath) {
        if (a.key == "n_points") r.parse_size(a, apath, &cfg.n_points);
        else if (a.key == "dq") r.parse_double(a, apath, &cfg.dq);
        else if (a.key == "mass_parameter") r.parse_double(a, apath, &cfg.mass_parameter, true);
      }, known);
    } else if (e.key == "observable") {
      if (!e.is_block()) {
        r.error(e, path, "must be a block");
        return;
      }
      std::ostringstream op;
      op << "observable[" << cfg.observables.size() << "]";
      MatrixSpec spec;
      if (read_matrix_block(*e.block, op.str(), r, &spec)) cfg.observables.push_back(std::move(spec));
    } else if (e.key == "switch") {
      if (!e.is_block()) {
        r.error(e, path, "must be a block");
        return;
      }
      static const std::set<std::string> known{"kind", "tau", "tau_grid", "ramp_fraction"};
      walk_block(*e.block, path, r, {}, [&](const RawEntry& s, const std::string& spath) {
        if (s.key == "kind") {
          r.parse_string(s, spath, &cfg.switch_kind);
          if (cfg.switch_kind != "ideal_constant" && cfg.switch_kind != "smooth_ramp")
            r.error(s, spath, "kind must be ideal_constant or smooth_ramp");
        } else if (s.key == "tau") {
          double v = 0.0;
          if (r.parse_double(s, spath, &v)) cfg.tau = v;
        } else if (s.key == "tau_grid") {
          r.parse_double_list(s, spath, &cfg.tau_grid);
        } else if (s.key == "ramp_fraction") {
          r.parse_double(s, spath, &cfg.ramp_fraction);
        }
      }, known);
    } else if (e.key == "slicing") {
      if (!e.is_block()) {
        r.error(e, path, "must be a block");
        return;
      }
      static const std::set<std::string> known{"n_steps"};
      walk_block(*e.block, path, r, {}, [&](const RawEntry& s, const std::string& spath) {
        r.parse_size(s, spath, &cfg.n_steps);
      }, known);
    } else if (e.key == "pointer") {
      if (!e.is_block()) {
        r.error(e, path, "must be a block");
        return;
      }
      static const std::set<std::string> known{"center_q", "width_sigma", "momentum_offset"};
      walk_block(*e.block, path, r, {}, [&](const RawEntry& p, const std::string& ppath) {
        if (p.key == "center_q") r.parse_double(p, ppath, &cfg.pointer.center_q);
        else if (p.key == "width_sigma") r.parse_double(p, ppath, &cfg.pointer.width_sigma);
        else if (p.key == "momentum_offset") r.parse_double(p, ppath, &cfg.pointer.momentum_offset);
      }, known);
    } else if (e.key == "input") {
      if (!e.is_block()) {
        r.error(e, path, "must be a block");
        return;
      }
      static const std::set<std::string> known{"kind", "index", "coeffs"};
      walk_block(*e.block, path, r, {}, [&](const RawEntry& in, const std::string& ipath) {
        if (in.key == "kind") {
          r.parse_string(in, ipath, &cfg.input_kind);
          if (cfg.input_kind != "eigenstate" && cfg.input_kind != "superposition")
            r.error(in, ipath, "kind must be eigenstate or superposition");
        } else if (in.key == "index") {
          r.parse_size(in, ipath, &cfg.input_index);
        } else if (in.key == "coeffs") {
          r.parse_complex_list(in, ipath, &cfg.input_coeffs);
        }
      }, known);
    } else if (e.key == "output") {
      if (!e.is_block()) {
        r.error(e, path, "must be a block");
        return;
      }
      static const std::set<std::string> known{"format", "path"};
      walk_block(*e.block, path, r, {}, [&](const RawEntry& o, const std::string& opath) {
        if (o.key == "format") {
          r.parse_string(o, opath, &cfg.output_format);
          if (cfg.output_format != "csv" && cfg.output_format != "json")
            r.error(o, opath, "format must be csv or json");
        } else if (o.key == "path") {
          r.parse_string(o, opath, &cfg.output_path);
        }
      }, known);
    } else if (e.key == "coupling_strength") {
      r.parse_double(e, path, &cfg.coupling_strength);
    } else if (e.key == "target_index") {
      r.parse_size(e, path, &cfg.target_index);
    } else if (e.key == "ramp_steps") {
      r.parse_size(e, path, &cfg.ramp_steps);
    } else if (e.key == "ramp_time") {
      r.parse_double(e, path, &cfg.ramp_time);
    }
  }, top_known);

  // ---- cross-field validation (collect everything) ----

  if (cfg.scenario.empty()) r.error("scenario", "required key missing");

  const bool needs_system = cfg.scenario == "protective" || cfg.scenario == "von_neumann" ||
                            cfg.scenario == "tomography" || cfg.scenario == "adiabatic_retune" ||
                            cfg.scenario == "sweep";
  if (needs_system && !cfg.system.present()) r.error("system", "required for this scenario");
  if (cfg.scenario == "two_box") {
    if (cfg.system.present() && cfg.system.builder != "two_box")
      r.error("system", "two_box scenario requires builder = two_box (or no system block)");
    const double eps = cfg.system.epsilon.value_or(0.0);
    if (cfg.system.present() && !(eps > 0.0))
      r.error("system.epsilon", "two_box tunneling splitting must be positive");
    if (!cfg.system.present()) {
      // default model
      cfg.system.builder = "two_box";
      cfg.system.epsilon = 0.5;
    }
  }

  if (cfg.system.present()) {
    if (cfg.system.matrix && !cfg.system.builder.empty())
      r.error("system", "give either an inline matrix or a builder, not both");
    if (cfg.system.builder == "two_box" && !cfg.system.epsilon.has_value())
      r.error("system.epsilon", "builder two_box requires epsilon");
    if (cfg.system.builder == "diag" && cfg.system.diag.empty())
      r.error("system.diag", "builder diag requires diagonal entries");
    if (cfg.system.matrix) {
      const double defect = hermiticity_defect_of(*cfg.system.matrix);
      if (defect > 1e-12) {
        std::ostringstream os;
        os << "system matrix is not Hermitian: defect norm " << defect;
        r.error("system.matrix", os.str());
      }
    }
  }
  if (cfg.system_end.present()) {
    if (cfg.system_end.matrix) {
      const double defect = hermiticity_defect_of(*cfg.system_end.matrix);
      if (defect > 1e-12) {
        std::ostringstream os;
        os << "system_end matrix is not Hermitian: defect norm " << defect;
        r.error("system_end.matrix", os.str());
      }
    }
  } else if (cfg.scenario == "adiabatic_retune") {
    r.error("system_end", "required for adiabatic_retune");
  }

  const std::size_t sys_dim = system_dim_of(cfg.system);
  if (cfg.system_end.present() && sys_dim > 0) {
    const std::size_t end_dim = system_dim_of(cfg.system_end);
    if (end_dim != sys_dim) {
      std::ostringstream os;
      os << "dimension mismatch: system_end dim " << end_dim << " vs system dim " << sys_dim;
      r.error("system_end", os.str());
    }
  }

  for (std::size_t i = 0; i < cfg.observables.size(); ++i) {
    std::ostringstream op;
    op << "observable[" << i << "]";
    const double defect = hermiticity_defect_of(cfg.observables[i]);
    if (defect > 1e-12) {
      std::ostringstream os;
      os << "observable is not Hermitian: defect norm " << defect;
      r.error(op.str(), os.str());
    }
    if (sys_dim > 0 && cfg.observables[i].dim != sys_dim) {
      std::ostringstream os;
      os << "dimension mismatch: observable dim " << cfg.observables[i].dim << " vs system dim "
         << sys_dim;
      r.error(op.str(), os.str());
    }
  }

  const bool needs_observable = cfg.scenario == "protective" || cfg.scenario == "von_neumann" ||
                                cfg.scenario == "tomography" || cfg.scenario == "sweep";
  if (needs_observable && cfg.observables.empty())
    r.error("observable", "required for this scenario");

  if (cfg.n_points < 16 || (cfg.n_points & (cfg.n_points - 1)) != 0)
    r.error("apparatus.n_points", "must be a power of two >= 16");
  if (!(cfg.dq > 0.0)) r.error("apparatus.dq", "must be positive");
  if (!(cfg.mass_parameter > 0.0)) r.error("apparatus.mass_parameter", "must be positive or inf");

  if (cfg.tau.has_value() && !(*cfg.tau > 0.0)) r.error("switch.tau", "must be positive");
  for (std::size_t i = 0; i + 1 < cfg.tau_grid.size(); ++i)
    if (!(cfg.tau_grid[i] < cfg.tau_grid[i + 1])) {
      r.error("switch.tau_grid", "must ascend strictly");
      break;
    }
  if (!cfg.tau_grid.empty() && !(cfg.tau_grid.front() > 0.0))
    r.error("switch.tau_grid", "entries must be positive");
  if (cfg.switch_kind == "smooth_ramp" &&
      !(cfg.ramp_fraction > 0.0 && cfg.ramp_fraction <= 0.2))
    r.error("switch.ramp_fraction", "must lie in (0, 0.2]");

  const bool needs_tau = cfg.scenario == "protective" || cfg.scenario == "von_neumann" ||
                         cfg.scenario == "tomography";
  if (needs_tau && !cfg.tau.has_value()) r.error("switch.tau", "required for this scenario");
  if (cfg.scenario == "sweep" && cfg.tau_grid.size() < 4)
    r.error("switch.tau_grid", "sweep needs an ascending grid with >= 4 points");
  if (cfg.scenario == "two_box" && cfg.tau_grid.empty() && !cfg.tau.has_value())
    r.error("switch", "two_box needs tau or tau_grid");

  if (cfg.n_steps < 1) r.error("slicing.n_steps", "must be >= 1");
  if (!(cfg.pointer.width_sigma > 0.0)) r.error("pointer.width_sigma", "must be positive");

  if (sys_dim > 0) {
    if (cfg.input_kind == "eigenstate" && cfg.input_index >= sys_dim)
      r.error("input.index", "eigenstate index exceeds system dimension");
    if (cfg.input_kind == "superposition" && cfg.input_coeffs.size() != sys_dim) {
      std::ostringstream os;
      os << "dimension mismatch: " << cfg.input_coeffs.size() << " coefficients vs system dim "
         << sys_dim;
      r.error("input.coeffs", os.str());
    }
    if (cfg.target_index >= sys_dim)
      r.error("target_index", "exceeds system dimension");
  }
  if (cfg.input_kind == "superposition" && cfg.input_coeffs.empty())
    r.error("input.coeffs", "superposition input needs coefficients");

  if (cfg.scenario == "von_neumann" && cfg.coupling_strength == 0.0)
    r.error("coupling_strength", "must be nonzero");
  if (cfg.scenario == "adiabatic_retune") {
    if (cfg.ramp_steps < 1) r.error("ramp_steps", "must be >= 1");
    if (!(cfg.ramp_time >= 0.0)) r.error("ramp_time", "must be nonnegative");
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

// ---- canonical serialization ----

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_matrix(std::ostringstream& os, const std::string& name, const MatrixSpec& m,
                 const char* indent = "") {
  os << indent << name << " {\n";
  os << indent << "  dim = " << m.dim << "\n";
  for (std::size_t i = 0; i < m.dim; ++i) {
    os << indent << "  row =";
    for (std::size_t j = 0; j < m.dim; ++j) {
      const cdouble z = m.entries[i * m.dim + j];
      os << " " << fmt(z.real()) << " " << fmt(z.imag());
    }
    os << "\n";
  }
  os << indent << "}\n";
}

void emit_system(std::ostringstream& os, const std::string& name, const SystemSpec& s) {
  os << name << " {\n";
  if (!s.builder.empty()) os << "  builder = " << s.builder << "\n";
  if (s.epsilon) os << "  epsilon = " << fmt(*s.epsilon) << "\n";
  if (!s.diag.empty()) {
    os << "  diag =";
    for (double d : s.diag) os << " " << fmt(d);
    os << "\n";
  }
  if (s.matrix) emit_matrix(os, "matrix", *s.matrix, "  ");
  os << "}\n";
}

}  // namespace

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "scenario = " << cfg.scenario << "\n";
  os << "seed = " << cfg.seed << "\n";
  if (cfg.system.present()) emit_system(os, "system", cfg.system);
  if (cfg.system_end.present()) emit_system(os, "system_end", cfg.system_end);
  os << "apparatus {\n  n_points = " << cfg.n_points << "\n  dq = " << fmt(cfg.dq)
     << "\n  mass_parameter = " << fmt(cfg.mass_parameter) << "\n}\n";
  for (const MatrixSpec& o : cfg.observables) emit_matrix(os, "observable", o);
  os << "switch {\n  kind = " << cfg.switch_kind << "\n";
  if (cfg.tau) os << "  tau = " << fmt(*cfg.tau) << "\n";
  if (!cfg.tau_grid.empty()) {
    os << "  tau_grid =";
    for (double t : cfg.tau_grid) os << " " << fmt(t);
    os << "\n";
  }
  os << "  ramp_fraction = " << fmt(cfg.ramp_fraction) << "\n}\n";
  os << "slicing {\n  n_steps = " << cfg.n_steps << "\n}\n";
  os << "pointer {\n  center_q = " << fmt(cfg.pointer.center_q)
     << "\n  width_sigma = " << fmt(cfg.pointer.width_sigma)
     << "\n  momentum_offset = " << fmt(cfg.pointer.momentum_offset) << "\n}\n";
  os << "input {\n  kind = " << cfg.input_kind << "\n  index = " << cfg.input_index << "\n";
  if (!cfg.input_coeffs.empty()) {
    os << "  coeffs =";
    for (const cdouble& z : cfg.input_coeffs)
      os << " " << fmt(z.real()) << " " << fmt(z.imag());
    os << "\n";
  }
  os << "}\n";
  os << "output {\n  format = " << cfg.output_format << "\n";
  if (!cfg.output_path.empty()) os << "  path = " << cfg.output_path << "\n";
  os << "}\n";
  os << "coupling_strength = " << fmt(cfg.coupling_strength) << "\n";
  os << "target_index = " << cfg.target_index << "\n";
  os << "ramp_steps = " << cfg.ramp_steps << "\n";
  os << "ramp_time = " << fmt(cfg.ramp_time) << "\n";
  return os.str();
}

std::vector<std::pair<std::string, std::string>> known_scenarios() {
  return {
      {"protective", "single adiabatic run: slow weak coupling over [0, tau], pointer readout"},
      {"von_neumann", "single impulsive kick exp(-i*strength*O(x)P), pointer readout"},
      {"two_box", "tunneling doublet: null protective readout, bimodal impulsive comparison"},
      {"tomography", "sequential protective runs feeding a pure-state reconstruction"},
      {"adiabatic_retune", "quasi-static Hamiltonian change tracking an eigenstate"},
      {"sweep", "tau-grid convergence scan (norm/conservation/matrix-element defects)"},
  };
}

// ---- execution ----

SystemHamiltonian system_from_spec(const SystemSpec& spec, const Tolerances& tol) {
  if (spec.builder == "two_box") return make_two_box(spec.epsilon.value_or(0.5), tol).system;
  if (spec.builder == "diag")
    return build_system(HermitianOperator(ComplexMatrix::diagonal_real(spec.diag), tol), tol);
  if (spec.matrix)
    return build_system(
        HermitianOperator(ComplexMatrix(spec.matrix->dim, spec.matrix->dim, spec.matrix->entries),
                          tol),
        tol);
  throw DimensionError("system specification is empty");
}

HermitianOperator observable_from_spec(const MatrixSpec& spec, const Tolerances& tol) {
  return HermitianOperator(ComplexMatrix(spec.dim, spec.dim, spec.entries), tol);
}

StateVector input_state_from_config(const ScenarioConfig& cfg, const SystemHamiltonian& system) {
  if (cfg.input_kind == "eigenstate") return system.eigenstate(cfg.input_index);
  // coefficients are in the energy eigenbasis: psi = sum_n c_n |phi_n>
  std::vector<cdouble> amps(system.dim(), cdouble{0.0, 0.0});
  for (std::size_t n = 0; n < system.dim(); ++n)
    for (std::size_t i = 0; i < system.dim(); ++i)
      amps[i] += cfg.input_coeffs[n] * system.eigenvectors(i, n);
  return StateVector::normalized(std::move(amps));
}

ScenarioOptions options_from_config(const ScenarioConfig& cfg, const Tolerances& tol) {
  ScenarioOptions opts;
  opts.n_points = cfg.n_points;
  opts.dq = cfg.dq;
  opts.mass_parameter = cfg.mass_parameter;
  opts.pointer = cfg.pointer;
  opts.vn_strength = cfg.coupling_strength;
  opts.slicing = TimeSlicing{cfg.n_steps};
  opts.tol = tol;
  return opts;
}

namespace {

MeasurementSetup setup_from_config(const ScenarioConfig& cfg, const SystemHamiltonian& system,
                                   const HermitianOperator& observable, double tau,
                                   const Tolerances& tol) {
  MeasurementSetup setup;
  setup.system = system;
  setup.apparatus = build_apparatus(cfg.n_points, cfg.dq, cfg.mass_parameter, tol);
  setup.observable = observable;
  setup.sw.kind = cfg.switch_kind == "smooth_ramp" ? SwitchProfile::Kind::smooth_ramp
                                                   : SwitchProfile::Kind::ideal_constant;
  setup.sw.tau = tau;
  setup.sw.ramp_fraction = cfg.ramp_fraction;
  setup.slicing = TimeSlicing{cfg.n_steps};
  setup.tol = tol;
  return setup;
}

}  // namespace

ScenarioReport run_config(const ScenarioConfig& cfg, const Tolerances& tol) {
  if (cfg.scenario == "two_box") {
    std::vector<double> grid = cfg.tau_grid;
    if (grid.empty()) grid.push_back(cfg.tau.value_or(1000.0));
    return scenario_two_box(cfg.system.epsilon.value_or(0.5), grid, options_from_config(cfg, tol));
  }
  if (cfg.scenario == "tomography") {
    const SystemHamiltonian system = system_from_spec(cfg.system, tol);
    std::vector<HermitianOperator> obs;
    for (const MatrixSpec& m : cfg.observables) obs.push_back(observable_from_spec(m, tol));
    return scenario_tomography(system, cfg.target_index, obs, *cfg.tau,
                               options_from_config(cfg, tol));
  }
  if (cfg.scenario == "adiabatic_retune") {
    const SystemHamiltonian start = system_from_spec(cfg.system, tol);
    const SystemHamiltonian end = system_from_spec(cfg.system_end, tol);
    return scenario_adiabatic_retune(start, end, cfg.ramp_steps, cfg.ramp_time,
                                     cfg.target_index, tol);
  }
  if (cfg.scenario == "protective") {
    const SystemHamiltonian system = system_from_spec(cfg.system, tol);
    const HermitianOperator obs = observable_from_spec(cfg.observables.front(), tol);
    const MeasurementSetup setup = setup_from_config(cfg, system, obs, *cfg.tau, tol);
    ScenarioReport report;
    report.name = "protective";
    report.records.push_back(
        run_protective(setup, input_state_from_config(cfg, system), cfg.pointer));
    return report;
  }
  if (cfg.scenario == "von_neumann") {
    const SystemHamiltonian system = system_from_spec(cfg.system, tol);
    const HermitianOperator obs = observable_from_spec(cfg.observables.front(), tol);
    const ApparatusModel apparatus = build_apparatus(cfg.n_points, cfg.dq, cfg.mass_parameter, tol);
    ScenarioReport report;
    report.name = "von_neumann";
    report.records.push_back(run_von_neumann(system, apparatus, obs,
                                             input_state_from_config(cfg, system), cfg.pointer,
                                             cfg.coupling_strength, tol));
    return report;
  }
  if (cfg.scenario == "sweep") return sweep_config(cfg, tol);
  throw DimensionError("unknown scenario '" + cfg.scenario + "'");
}

ScenarioReport sweep_config(const ScenarioConfig& cfg, const Tolerances& tol) {
  const SystemHamiltonian system = system_from_spec(cfg.system, tol);
  const HermitianOperator obs = observable_from_spec(cfg.observables.front(), tol);
  const MeasurementSetup setup =
      setup_from_config(cfg, system, obs, cfg.tau_grid.front(), tol);
  const StateVector chi = prepare_packet(setup.apparatus, cfg.pointer);
  ScenarioReport report;
  report.name = "sweep";
  report.tables.emplace_back("convergence", matrix_element_scan(setup, chi, cfg.tau_grid));
  return report;
}

}  // namespace pmlab
