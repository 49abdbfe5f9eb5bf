// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "gfnoma/config.hpp"
#include "gfnoma/detect.hpp"

namespace gfnoma {

// Per-run fixed objects: layout, codebooks, masking table and codec.
struct ScenarioAssets {
  GridLayout layout;
  Codebook pilot_codebook;
  Codebook data_codebook;
  std::optional<MaskingTable> masks;
  std::unique_ptr<ChannelCodec> codec;
};

// Codebooks are loaded from the configured paths or generated from the
// master seed; masks are drawn from the master seed.
ScenarioAssets make_assets(const ScenarioConfig& cfg);

// SplitMix64 finalizer over (master, trial, stream).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream);

struct TrialReport {
  std::vector<std::size_t> active;     // true active UEs, ascending
  std::size_t estimated_ka = 0;
  std::vector<std::size_t> detected;   // ascending
  std::vector<std::size_t> decoded;    // correctly decoded true UEs, ascending
  std::vector<double> nmse;            // linear channel NMSE per correctly detected UE
  std::vector<double> eigenvalues;     // sample autocorrelation, descending
};

// One Monte-Carlo trial. All randomness derives from (cfg.seed, trial); the
// swept parameter does not enter the seeds, so sweep points share random
// numbers trial by trial.
TrialReport run_trial(const ScenarioConfig& cfg, const ScenarioAssets& assets, std::uint64_t trial);

struct SweepPoint {
  double sweep_value = 0.0;
  double mean_decoded = 0.0;
  double miss_rate = 0.0;
  double fa_rate = 0.0;
  double mean_ka_hat = 0.0;
  double mean_nmse_db = 0.0;  // 10 log10 of the mean linear NMSE
  std::size_t trials = 0;
  double exact_support_rate = 0.0;
  double median_ka_hat = 0.0;
  std::vector<std::size_t> ka_histogram;  // index = estimated K_a
  std::vector<double> mean_eigenvalues;
  std::vector<TrialReport> reports;       // in trial order
};

// Trials run on `cfg.threads` workers and are reduced in trial order.
std::vector<SweepPoint> run_sweep(const ScenarioConfig& cfg);
std::vector<SweepPoint> run_sweep(const ScenarioConfig& cfg, const ScenarioAssets& assets);

inline constexpr const char* kCsvHeader =
    "sweep_value,mean_decoded,miss_rate,fa_rate,mean_ka_hat,mean_nmse_db,trials";

std::string format_csv(std::span<const SweepPoint> points);
// Writes to a temporary sibling and renames it over `path`.
void emit_csv(std::span<const SweepPoint> points, const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Eigenvalues of one realization (trial index `trial`) at every sweep point.
std::vector<std::vector<double>> eigen_profiles(const ScenarioConfig& cfg, const ScenarioAssets& assets,
                                                std::uint64_t trial);
// "sweep_value,lambda_1,...,lambda_Lp" rows.
std::string format_eigen_csv(std::span<const double> sweep_values, std::span<const std::vector<double>> profiles);

std::string shortest_repr(double v);

}  // namespace gfnoma
