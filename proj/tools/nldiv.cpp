#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nldiv/csv.hpp"
#include "nldiv/runner.hpp"

// Batch front-end: parse an experiment config (or assemble one from flags),
// dispatch, and emit CSV on stdout or into --out.  Exit status is nonzero
// iff an acceptance assertion inside the experiment failed.

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  bool deterministic = false;
  int threads = 0;
  long long seed = -1;
  double s = 0.0;
  int n = 0;
  int mesh_n = 0;
  double rho = 0.0;
  bool rho_set = false;
};

void add_common(CLI::App* cmd, CommonFlags* fl) {
  cmd->add_option("--config", fl->config_path, "experiment config file (TOML syntax)");
  cmd->add_option("--out", fl->out_path, "write CSV here instead of stdout");
  cmd->add_flag("--deterministic", fl->deterministic,
                "fixed-order reductions and seeded randomness");
  cmd->add_option("--threads", fl->threads, "worker threads (default 1 or NLDIV_THREADS)");
  cmd->add_option("--seed", fl->seed, "seed for randomized suites");
  cmd->add_option("--s", fl->s, "fractional order override");
  cmd->add_option("--n", fl->n, "dimension override");
  cmd->add_option("--mesh-n", fl->mesh_n, "elements per axis override");
  cmd->add_option("--rho", fl->rho, "horizon override")->each([fl](const std::string&) {
    fl->rho_set = true;
  });
}

int run_command(const std::string& name, const CommonFlags& fl) {
  nldiv::ExperimentConfig cfg;
  if (!fl.config_path.empty()) {
    cfg = nldiv::load_config(fl.config_path);
    if (cfg.experiment != name) {
      std::cerr << "config declares experiment '" << cfg.experiment
                << "' but subcommand is '" << name << "'\n";
      return 2;
    }
  } else {
    cfg = nldiv::default_config(name);
  }
  // precedence: flag, then config, then NLDIV_THREADS, then 1
  if (fl.deterministic) cfg.deterministic = true;
  if (fl.threads > 0) {
    cfg.threads = fl.threads;
  } else if (!cfg.threads_explicit) {
    if (const char* env = std::getenv("NLDIV_THREADS")) {
      const int t = std::atoi(env);
      if (t > 0) cfg.threads = t;
    }
  }
  if (fl.seed >= 0) cfg.seed = static_cast<unsigned long long>(fl.seed);
  if (fl.s > 0.0) cfg.s_values = {fl.s};
  if (fl.n > 0) cfg.n = fl.n;
  if (fl.mesh_n > 0) cfg.mesh_n = fl.mesh_n;
  if (fl.rho_set) cfg.rho = fl.rho;
  nldiv::finalize_config(cfg);

  const nldiv::RunResult res = nldiv::run_experiment(cfg);
  if (fl.out_path.empty()) {
    std::cout << res.csv;
  } else {
    // write-then-rename, no partial files on failure
    const std::string tmp = fl.out_path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) {
        std::cerr << "cannot open " << tmp << "\n";
        return 2;
      }
      out << res.csv;
    }
    if (std::rename(tmp.c_str(), fl.out_path.c_str()) != 0) {
      std::cerr << "cannot rename into " << fl.out_path << "\n";
      return 2;
    }
  }
  return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"nldiv - anisotropic nonlocal divergence-form operator lab"};
  app.require_subcommand(1);

  const char* names[] = {"constants", "recover-a", "build-m",
                         "solve",     "sweep-s",   "limits",
                         "verify"};
  const char* descs[] = {
      "normalizing constant and its s->0 / s->1 limits",
      "sphere-quadrature recovery of A from its kernel modulation",
      "build the kernel-modulating field and check its structure",
      "solve the semilinear nonlocal Dirichlet problem",
      "solution sweep in s against the local limit",
      "bilinear-form limits s->1 and s->0",
      "run the full invariant suite"};

  CommonFlags flags[7];
  for (int i = 0; i < 7; ++i) {
    CLI::App* cmd = app.add_subcommand(names[i], descs[i]);
    add_common(cmd, &flags[i]);
  }

  CLI11_PARSE(app, argc, argv);

  for (int i = 0; i < 7; ++i) {
    if (app.got_subcommand(names[i])) {
      try {
        return run_command(names[i], flags[i]);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
    }
  }
  return 2;
}
