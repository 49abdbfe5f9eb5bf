// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gfnoma {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError("config: bad value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "on" || text == "true" || text == "1" || text == "yes") return true;
  if (text == "off" || text == "false" || text == "0" || text == "no") return false;
  throw ParseError("config: bad boolean '" + std::string(text) + "' for " + std::string(key));
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<double>(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_string(PilotStrategy s) { return s == PilotStrategy::split ? "split" : "contiguous"; }
std::string to_string(ChannelModel m) { return m == ChannelModel::tdl_c ? "tdl_c" : "ped_a"; }
std::string to_string(ActivityMode m) { return m == ActivityMode::perfect ? "perfect" : "bic_music"; }
std::string to_string(SweepKind k) { return k == SweepKind::rms_ds_ns ? "rms_ds_ns" : "snr_db"; }

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError("config: " + msg); };
  if (num_users == 0) fail("K must be positive");
  if (num_active > num_users) fail("Ka must not exceed K");
  if (num_rb_freq == 0 || num_slots == 0) fail("grid must have at least one RB and one slot");
  if (pilot_length == 0 || data_length == 0) fail("L and Lp must be positive");
  if (pilot_length > num_users) fail("Lp must not exceed K");
  if (strategy == PilotStrategy::split && num_slots % 2 != 0) fail("split pilots need an even slot count");
  if (data_codebook_size < data_length) fail("data codebook size must be at least L");
  if (num_rx == 0) fail("num_rx must be positive");
  if (trials == 0) fail("trials must be at least 1");
  if (!(noise_var > 0.0)) fail("noise_var must be positive");
  if (!(pathloss_spread_db >= 0.0)) fail("pathloss_spread_db must be >= 0");
  if (!(velocity_mps >= 0.0)) fail("velocity must be >= 0");
  if (!(rms_ds_ns >= 0.0)) fail("rms_ds_ns must be >= 0");
  if (ka_max >= pilot_length) fail("ka_max must be below Lp");
  if (sweep == SweepKind::rms_ds_ns && channel != ChannelModel::tdl_c) fail("rms_ds_ns sweep needs channel = tdl_c");
  for (const double v : sweep_values)
    if (!std::isfinite(v) || (sweep == SweepKind::rms_ds_ns && v < 0.0)) fail("bad sweep value");
  build_layout(strategy, num_rb_freq, num_slots, data_length, pilot_length);
}

std::size_t ScenarioConfig::effective_ka_max() const {
  return ka_max != 0 ? ka_max : std::min(pilot_length - 1, num_users);
}

std::vector<double> ScenarioConfig::sweep_points() const {
  if (!sweep_values.empty()) return sweep_values;
  return {sweep == SweepKind::snr_db ? snr_db : rms_ds_ns};
}

ScenarioConfig ScenarioConfig::at_point(double value) const {
  ScenarioConfig c = *this;
  if (sweep == SweepKind::snr_db)
    c.snr_db = value;
  else
    c.rms_ds_ns = value;
  return c;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  using Size = std::size_t;
  value = trim(value);
  if (key == "K") cfg.num_users = parse_number<Size>(key, value);
  else if (key == "Ka") cfg.num_active = parse_number<Size>(key, value);
  else if (key == "num_rb_freq") cfg.num_rb_freq = parse_number<Size>(key, value);
  else if (key == "num_slots") cfg.num_slots = parse_number<Size>(key, value);
  else if (key == "L") cfg.data_length = parse_number<Size>(key, value);
  else if (key == "Lp") cfg.pilot_length = parse_number<Size>(key, value);
  else if (key == "data_codebook_size") cfg.data_codebook_size = parse_number<Size>(key, value);
  else if (key == "strategy") {
    if (value == "contiguous") cfg.strategy = PilotStrategy::contiguous;
    else if (value == "split") cfg.strategy = PilotStrategy::split;
    else throw ParseError("config: strategy must be contiguous or split");
  } else if (key == "masking") cfg.masking = parse_bool(key, value);
  else if (key == "channel") {
    if (value == "ped_a") cfg.channel = ChannelModel::ped_a;
    else if (value == "tdl_c") cfg.channel = ChannelModel::tdl_c;
    else throw ParseError("config: channel must be ped_a or tdl_c");
  } else if (key == "rms_ds_ns") cfg.rms_ds_ns = parse_number<double>(key, value);
  else if (key == "velocity") cfg.velocity_mps = parse_number<double>(key, value);
  else if (key == "num_rx") cfg.num_rx = parse_number<Size>(key, value);
  else if (key == "snr_db") cfg.snr_db = parse_number<double>(key, value);
  else if (key == "sweep") {
    if (value == "snr_db") cfg.sweep = SweepKind::snr_db;
    else if (value == "rms_ds_ns") cfg.sweep = SweepKind::rms_ds_ns;
    else throw ParseError("config: sweep must be snr_db or rms_ds_ns");
  } else if (key == "sweep_values") cfg.sweep_values = parse_list(key, value);
  else if (key == "pathloss_spread_db") cfg.pathloss_spread_db = parse_number<double>(key, value);
  else if (key == "noise_var") cfg.noise_var = parse_number<double>(key, value);
  else if (key == "code_rate") {
    try {
      cfg.code_rate = parse_code_rate(value);
    } catch (const std::exception&) {
      throw ParseError("config: code_rate must be 1/2 or 2/3");
    }
  } else if (key == "pic_iters") cfg.pic_iterations = parse_number<Size>(key, value);
  else if (key == "trials") cfg.trials = parse_number<Size>(key, value);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "activity") {
    if (value == "bic_music") cfg.activity = ActivityMode::bic_music;
    else if (value == "perfect") cfg.activity = ActivityMode::perfect;
    else throw ParseError("config: activity must be bic_music or perfect");
  } else if (key == "perfect_csi") cfg.perfect_csi = parse_bool(key, value);
  else if (key == "noiseless") cfg.noiseless = parse_bool(key, value);
  else if (key == "ka_max") cfg.ka_max = parse_number<Size>(key, value);
  else if (key == "grassmann_iters") cfg.grassmann_iterations = parse_number<Size>(key, value);
  else if (key == "pilot_codebook") cfg.pilot_codebook = std::string(value);
  else if (key == "data_codebook") cfg.data_codebook = std::string(value);
  else if (key == "threads") cfg.threads = parse_number<Size>(key, value);
  else throw ParseError("config: unknown key '" + std::string(key) + "'");
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    try {
      apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ParseError& e) {
      throw ParseError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), std::move(base));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream o;
  auto on = [](bool b) { return b ? "on" : "off"; };
  o << "K = " << c.num_users << "\nKa = " << c.num_active << "\nnum_rb_freq = " << c.num_rb_freq
    << "\nnum_slots = " << c.num_slots << "\nL = " << c.data_length << "\nLp = " << c.pilot_length
    << "\ndata_codebook_size = " << c.data_codebook_size << "\nstrategy = " << to_string(c.strategy)
    << "\nmasking = " << on(c.masking) << "\nchannel = " << to_string(c.channel)
    << "\nrms_ds_ns = " << shortest(c.rms_ds_ns) << "\nvelocity = " << shortest(c.velocity_mps)
    << "\nnum_rx = " << c.num_rx << "\nsnr_db = " << shortest(c.snr_db) << "\nsweep = " << to_string(c.sweep)
    << "\nsweep_values = ";
  for (std::size_t i = 0; i < c.sweep_values.size(); ++i) o << (i ? "," : "") << shortest(c.sweep_values[i]);
  o << "\npathloss_spread_db = " << shortest(c.pathloss_spread_db) << "\nnoise_var = " << shortest(c.noise_var)
    << "\ncode_rate = " << to_string(c.code_rate) << "\npic_iters = " << c.pic_iterations
    << "\ntrials = " << c.trials << "\nseed = " << c.seed << "\nactivity = " << to_string(c.activity)
    << "\nperfect_csi = " << on(c.perfect_csi) << "\nnoiseless = " << on(c.noiseless) << "\nka_max = " << c.ka_max
    << "\ngrassmann_iters = " << c.grassmann_iterations << "\npilot_codebook = " << c.pilot_codebook
    << "\ndata_codebook = " << c.data_codebook << "\nthreads = " << c.threads << "\n";
  return o.str();
}

}  // namespace gfnoma
