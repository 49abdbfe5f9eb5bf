// SPDX-License-Identifier: Apache-2.0
// Command-line front end: scenario sweeps, codebook generation, eigenvalue dumps.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "gfnoma/harness.hpp"
#include "gfnoma/kernels.hpp"

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> settings;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("config", c.config_path, "Scenario file (key = value lines)")->check(CLI::ExistingFile);
  app->add_option("--set", c.settings, "Override one setting, key=value (repeatable)");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--trials", c.trials, "Trials per sweep point");
  app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  app->add_option("--out", c.out, "Output file (stdout when omitted)");
}

gfnoma::ScenarioConfig resolve(const Common& c) {
  gfnoma::ScenarioConfig cfg;
  if (!c.config_path.empty()) cfg = gfnoma::load_config(c.config_path, cfg);
  for (const auto& s : c.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw gfnoma::ParseError("--set expects key=value, got '" + s + "'");
    gfnoma::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (c.seed) cfg.seed = *c.seed;
  if (c.trials) cfg.trials = *c.trials;
  if (c.threads) cfg.threads = *c.threads;
  cfg.validate();
  return cfg;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    gfnoma::write_file_atomic(path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grant-free NOMA link-level simulator"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "Kernel instruction set: scalar, avx2, neon");

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run a Monte-Carlo sweep and write the CSV");
  add_common(run, run_opts);
  bool summary = false;
  run->add_flag("--summary", summary, "Print per-point detection statistics to stderr");

  Common eig_opts;
  std::uint64_t eig_trial = 0;
  auto* eigens = app.add_subcommand("eigens", "Eigenvalues of one realization per sweep point");
  add_common(eigens, eig_opts);
  eigens->add_option("--trial", eig_trial, "Trial index of the realization");

  std::size_t cb_length = 12, cb_size = 32, cb_iters = 1000;
  std::uint64_t cb_seed = 1;
  std::string cb_out;
  auto* codebook = app.add_subcommand("codebook", "Generate a low-coherence codebook and save it");
  codebook->add_option("--length", cb_length, "Signature length L")->check(CLI::PositiveNumber);
  codebook->add_option("--size", cb_size, "Number of signatures K")->check(CLI::PositiveNumber);
  codebook->add_option("--iters", cb_iters, "Alternating-projection iterations");
  codebook->add_option("--seed", cb_seed, "Generator seed");
  codebook->add_option("--out", cb_out, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!isa.empty()) {
      const auto chosen = gfnoma::kernels::parse_isa(isa);
      if (!chosen) throw gfnoma::InvalidInput("unknown instruction set '" + isa + "'");
      gfnoma::kernels::select(*chosen);
    }

    if (*run) {
      const auto cfg = resolve(run_opts);
      const auto points = gfnoma::run_sweep(cfg);
      write_output(run_opts.out, gfnoma::format_csv(points));
      if (summary)
        for (const auto& p : points)
          std::fprintf(stderr, "point %g: decoded %.3f exact-support %.3f median ka %.1f\n", p.sweep_value,
                       p.mean_decoded, p.exact_support_rate, p.median_ka_hat);
    } else if (*eigens) {
      const auto cfg = resolve(eig_opts);
      const auto assets = gfnoma::make_assets(cfg);
      const auto values = cfg.sweep_points();
      const auto profiles = gfnoma::eigen_profiles(cfg, assets, eig_trial);
      write_output(eig_opts.out, gfnoma::format_eigen_csv(values, profiles));
    } else if (*codebook) {
      const auto cb = gfnoma::generate_grassmannian(cb_length, cb_size, cb_seed, cb_iters);
      gfnoma::save_codebook(cb, cb_out);
      std::fprintf(stderr, "coherence %.6f welch %.6f\n", cb_size > 1 ? gfnoma::coherence(cb) : 0.0,
                   gfnoma::welch_bound(cb_length, cb_size));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
