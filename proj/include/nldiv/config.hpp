#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nldiv/fields.hpp"
#include "nldiv/mesh.hpp"
#include "nldiv/nonlinearity.hpp"

// Experiment configuration: a TOML-syntax key = value file with a versioned
// schema.  Unknown keys, out-of-range values and data that violates the
// domination condition are rejected at load with the offending key and line.

namespace nldiv {

struct FieldSpec {
  std::string kind = "identity"; // identity | anisotropic-diag | rotating-field
                                 // | step-field | constant | rotation-eigs
  std::vector<double> diag;      // anisotropic-diag
  std::vector<double> entries;   // constant, packed upper triangle
  std::vector<double> eigs;      // rotation-eigs / rotating-field
  double theta = 0.0;            // rotation-eigs
  double omega = 1.0;            // rotating-field
  double lo = 1.0, hi = 2.0;     // step-field
};

struct DataSpec {
  double a = 1.0;
  double f = 0.0;
  double q = 0.5;
  std::string h = "identity";           // identity | cubic | atan
  std::string a_profile = "constant";   // constant | bump
  std::string f_profile = "constant";
};

struct ExperimentConfig {
  int schema = 1;
  std::string experiment; // constants|recover-a|build-m|solve|sweep-s|limits|verify
  int n = 1;
  double domain_a = -1.0, domain_b = 1.0;
  int mesh_n = 128;
  std::vector<double> s_values{0.5};
  std::vector<int> ell_grid;
  double rho = std::numeric_limits<double>::infinity();
  int level = 3;
  unsigned long long seed = 0;
  bool deterministic = false;
  int threads = 1;
  bool linear_mode = false;
  FieldSpec field;
  DataSpec data;
  double tol_outer = 1e-7;
  double tol_newton = 1e-11;
  bool threads_explicit = false; // set when the file pinned `threads`
  std::string solution_out;      // optional two-column node/value dump

  std::string hash; // FNV-1a of the canonical key=value dump plus seed

  MatrixFieldA make_field() const;
  Mesh make_mesh() const;
  ProblemData make_data(const Mesh& mesh) const;
  std::string canonical() const;
};

// Throws std::invalid_argument with "<path>:<line>: <what>" context.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text,
                              const std::string& origin = "<config>");

// Defaults for a named experiment without a file.
ExperimentConfig default_config(const std::string& experiment);

// Recomputes the config hash from the canonical dump.
void finalize_config(ExperimentConfig& cfg);

unsigned long long fnv1a(const std::string& text);

} // namespace nldiv
