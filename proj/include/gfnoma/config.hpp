// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gfnoma/codec.hpp"
#include "gfnoma/frame.hpp"

namespace gfnoma {

enum class ChannelModel { ped_a, tdl_c };
enum class ActivityMode { bic_music, perfect };
enum class SweepKind { snr_db, rms_ds_ns };

// Scenario description. Defaults reproduce the 12-RB, 32-user, 8-active
// setting with 2 receive antennas at 20 dB.
struct ScenarioConfig {
  std::size_t num_users = 32;     // K
  std::size_t num_active = 8;     // K_a
  std::size_t num_rb_freq = 6;
  std::size_t num_slots = 2;
  std::size_t data_length = 4;    // L
  std::size_t pilot_length = 12;  // L_p
  std::size_t data_codebook_size = 16;
  PilotStrategy strategy = PilotStrategy::contiguous;
  bool masking = true;
  ChannelModel channel = ChannelModel::ped_a;
  double rms_ds_ns = 0.0;  // TDL-C only
  double velocity_mps = 0.0;
  std::size_t num_rx = 2;
  double snr_db = 20.0;
  SweepKind sweep = SweepKind::snr_db;
  std::vector<double> sweep_values;  // empty: a single point at the fixed value
  double pathloss_spread_db = 5.0;
  double noise_var = 1.0;
  CodeRate code_rate = CodeRate::two_thirds;
  std::size_t pic_iterations = 6;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  ActivityMode activity = ActivityMode::bic_music;
  bool perfect_csi = false;
  bool noiseless = false;
  std::size_t ka_max = 0;  // 0: min(L_p - 1, K)
  std::size_t grassmann_iterations = 1000;
  std::string pilot_codebook;  // optional codebook file, generated when empty
  std::string data_codebook;
  std::size_t threads = 0;  // 0: hardware concurrency

  // Throws ValidationError describing the first violated constraint.
  void validate() const;

  std::size_t effective_ka_max() const;
  std::vector<double> sweep_points() const;
  // Copy with the swept parameter set to `value`.
  ScenarioConfig at_point(double value) const;
};

std::string to_string(PilotStrategy s);
std::string to_string(ChannelModel m);
std::string to_string(ActivityMode m);
std::string to_string(SweepKind k);

// Sets one field from its textual key and value. Throws ParseError for
// unknown keys or malformed values.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

// Flat "key = value" lines; '#' starts a comment, blank lines are ignored.
// Settings are applied on top of `base`. Errors carry the line number.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});

// Writes every key in a form parse_config accepts.
std::string format_config(const ScenarioConfig& cfg);

}  // namespace gfnoma
