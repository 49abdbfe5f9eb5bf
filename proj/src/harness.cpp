// SPDX-License-Identifier: Apache-2.0

#include "gfnoma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "gfnoma/chanest.hpp"
#include "gfnoma/channel.hpp"
#include "gfnoma/receiver.hpp"

namespace gfnoma {

namespace {

constexpr std::uint64_t kAssetTrial = ~std::uint64_t{0};
constexpr std::uint64_t kCodebookSeed = 0x5eed'c0de'b00cULL;

enum Stream : std::uint64_t {
  kStreamActivity = 0,
  kStreamPowers = 1,
  kStreamNoise = 2,
  kStreamMasks = 3,
  kStreamChannel = 1000,
  kStreamPayload = 2000,
};

Codebook codebook_for(const std::string& path, std::size_t length, std::size_t size, std::uint64_t seed,
                      std::size_t iterations) {
  if (!path.empty()) {
    Codebook cb = load_codebook(path);
    if (cb.length() != length || cb.size() < size)
      throw ValidationError("codebook " + path + " does not match the configured dimensions");
    return cb;
  }
  return generate_grassmannian(length, size, seed, iterations);
}

PowerDelayProfile profile_for(const ScenarioConfig& cfg) {
  return cfg.channel == ChannelModel::ped_a ? pdp_ped_a() : pdp_tdl_c(cfg.rms_ds_ns * 1e-9);
}

bool contains(const std::vector<std::size_t>& sorted, std::size_t v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ trial) ^ stream);
}

ScenarioAssets make_assets(const ScenarioConfig& cfg) {
  cfg.validate();
  GridLayout layout = build_layout(cfg.strategy, cfg.num_rb_freq, cfg.num_slots, cfg.data_length, cfg.pilot_length);
  Codebook pilot = codebook_for(cfg.pilot_codebook, cfg.pilot_length, cfg.num_users, kCodebookSeed,
                                cfg.grassmann_iterations);
  Codebook data = codebook_for(cfg.data_codebook, cfg.data_length, cfg.data_codebook_size, kCodebookSeed + 1,
                               cfg.grassmann_iterations);
  std::optional<MaskingTable> masks;
  if (cfg.masking)
    masks = generate_masking(cfg.num_users, layout.pilot_blocks().size(),
                             derive_seed(cfg.seed, kAssetTrial, kStreamMasks));
  auto codec = make_codec(cfg.code_rate);
  info_bits_for(layout.data_blocks().size(), *codec);
  return {std::move(layout), std::move(pilot), std::move(data), std::move(masks), std::move(codec)};
}

TrialReport run_trial(const ScenarioConfig& cfg, const ScenarioAssets& assets, std::uint64_t trial) {
  const auto& layout = assets.layout;
  const std::size_t ka = cfg.num_active;
  const GridDims dims = layout.dims(cfg.num_rx);
  const auto seed = [&](std::uint64_t stream) { return derive_seed(cfg.seed, trial, stream); };

  TrialReport report;
  {
    std::mt19937_64 rng(seed(kStreamActivity));
    std::vector<std::size_t> all(cfg.num_users);
    std::iota(all.begin(), all.end(), 0);
    std::sample(all.begin(), all.end(), std::back_inserter(report.active), ka, rng);
  }

  const auto powers = draw_rx_powers(ka, cfg.snr_db, cfg.pathloss_spread_db, cfg.noise_var, seed(kStreamPowers));
  const PowerDelayProfile pdp = profile_for(cfg);
  const std::size_t info_len = info_bits_for(layout.data_blocks().size(), *assets.codec);

  std::vector<ChannelRealization> channels;
  std::vector<std::size_t> pilot_sigs(ka), data_sigs(ka);
  std::vector<Bits> info(ka);
  std::vector<ComplexVector> symbols(ka);
  for (std::size_t i = 0; i < ka; ++i) {
    const std::size_t u = report.active[i];
    channels.push_back(realize_channel(pdp, dims, cfg.velocity_mps, seed(kStreamChannel + u)));
    channels.back().rx_power = powers[i];
    pilot_sigs[i] = u;
    data_sigs[i] = u % assets.data_codebook.size();
    std::mt19937_64 rng(seed(kStreamPayload + u));
    std::bernoulli_distribution coin(0.5);
    Bits bits(info_len);
    for (auto& b : bits) b = coin(rng) ? 1 : 0;
    UePayload payload = build_payload(std::move(bits), *assets.codec);
    info[i] = std::move(payload.info_bits);
    symbols[i] = std::move(payload.qam_symbols);
  }

  ResourceGrid grid(dims);
  const MaskingTable* masks = assets.masks ? &*assets.masks : nullptr;
  map_pilots(grid, layout, assets.pilot_codebook, masks, pilot_sigs, channels);
  map_data(grid, layout, assets.data_codebook, data_sigs, channels, symbols);
  if (!cfg.noiseless) add_awgn(grid, cfg.noise_var, seed(kStreamNoise));

  const auto blocks = extract_pilot_blocks(grid, layout);
  if (cfg.activity == ActivityMode::bic_music) {
    DetectionResult det = detect(blocks, assets.pilot_codebook, cfg.noise_var, cfg.effective_ka_max());
    report.estimated_ka = det.estimated_ka;
    report.detected = std::move(det.active_set);
    report.eigenvalues = std::move(det.eigenvalues);
  } else {
    report.estimated_ka = ka;
    report.detected = report.active;
    report.eigenvalues = hermitian_eigendecompose(sample_autocorrelation(blocks)).eigenvalues;
  }
  if (report.detected.empty()) return report;

  // Index of every true UE inside report.active.
  auto truth_index = [&](std::size_t u) {
    return static_cast<std::size_t>(std::lower_bound(report.active.begin(), report.active.end(), u) -
                                    report.active.begin());
  };

  std::vector<ResourceGrid> estimates;
  if (cfg.perfect_csi) {
    for (const auto u : report.detected) {
      ResourceGrid g(dims);
      if (contains(report.active, u)) {
        const std::size_t i = truth_index(u);
        const double amp = std::sqrt(static_cast<double>(cfg.pilot_length) * channels[i].rx_power);
        auto src = channels[i].gains.values();
        auto dst = g.values();
        for (std::size_t n = 0; n < dst.size(); ++n) dst[n] = amp * src[n];
      }
      estimates.push_back(std::move(g));
    }
  } else {
    try {
      estimates = estimate_channels(blocks, layout, cfg.num_rx, assets.pilot_codebook, masks, report.detected).grids;
    } catch (const RankDeficient&) {
      return report;
    }
  }

  for (std::size_t d = 0; d < report.detected.size(); ++d) {
    const std::size_t u = report.detected[d];
    if (!contains(report.active, u)) continue;
    const std::size_t i = truth_index(u);
    const double amp = std::sqrt(static_cast<double>(cfg.pilot_length) * channels[i].rx_power);
    double err = 0.0, ref = 0.0;
    const auto est = estimates[d].values();
    const auto h = channels[i].gains.values();
    for (std::size_t n = 0; n < est.size(); ++n) {
      err += std::norm(est[n] - amp * h[n]);
      ref += std::norm(amp * h[n]);
    }
    report.nmse.push_back(err / ref);
  }

  std::vector<ReceiverUe> rx_ues;
  for (std::size_t d = 0; d < report.detected.size(); ++d)
    rx_ues.push_back({report.detected[d], report.detected[d] % assets.data_codebook.size(), &estimates[d]});
  const ReceiverConfig rx_cfg{cfg.noiseless ? 0.0 : cfg.noise_var, cfg.pic_iterations};
  const ReceiveResult rx = mmse_pic_receive(grid, layout, rx_ues, assets.data_codebook, *assets.codec, rx_cfg);

  for (const auto d : rx.decoded) {
    const std::size_t u = report.detected[d];
    if (contains(report.active, u) && rx.info_bits[d] == info[truth_index(u)]) report.decoded.push_back(u);
  }
  std::sort(report.decoded.begin(), report.decoded.end());
  return report;
}

std::vector<SweepPoint> run_sweep(const ScenarioConfig& cfg) { return run_sweep(cfg, make_assets(cfg)); }

std::vector<SweepPoint> run_sweep(const ScenarioConfig& cfg, const ScenarioAssets& assets) {
  cfg.validate();
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(cfg.threads ? cfg.threads : std::thread::hardware_concurrency(), cfg.trials));

  std::vector<SweepPoint> points;
  for (const double value : cfg.sweep_points()) {
    const ScenarioConfig pc = cfg.at_point(value);
    std::vector<TrialReport> reports(cfg.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (std::size_t t; (t = next.fetch_add(1)) < cfg.trials;) {
        try {
          reports[t] = run_trial(pc, assets, t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = cfg.trials;
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    SweepPoint p;
    p.sweep_value = value;
    p.trials = cfg.trials;
    p.ka_histogram.assign(cfg.pilot_length + 1, 0);
    p.mean_eigenvalues.assign(cfg.pilot_length, 0.0);
    double nmse_sum = 0.0;
    std::size_t nmse_count = 0, exact = 0;
    std::vector<std::size_t> ka_hats;
    const double inactive = static_cast<double>(cfg.num_users - cfg.num_active);
    for (const auto& r : reports) {
      std::size_t missed = 0, false_alarms = 0;
      for (const auto u : r.active) missed += !contains(r.detected, u);
      for (const auto u : r.detected) false_alarms += !contains(r.active, u);
      p.mean_decoded += static_cast<double>(r.decoded.size());
      if (cfg.num_active > 0) p.miss_rate += static_cast<double>(missed) / static_cast<double>(cfg.num_active);
      if (inactive > 0) p.fa_rate += static_cast<double>(false_alarms) / inactive;
      p.mean_ka_hat += static_cast<double>(r.estimated_ka);
      exact += r.detected == r.active;
      ++p.ka_histogram[std::min(r.estimated_ka, cfg.pilot_length)];
      ka_hats.push_back(r.estimated_ka);
      for (const double e : r.nmse) nmse_sum += e;
      nmse_count += r.nmse.size();
      for (std::size_t k = 0; k < r.eigenvalues.size() && k < cfg.pilot_length; ++k)
        p.mean_eigenvalues[k] += r.eigenvalues[k];
    }
    const double n = static_cast<double>(cfg.trials);
    p.mean_decoded /= n;
    p.miss_rate /= n;
    p.fa_rate /= n;
    p.mean_ka_hat /= n;
    p.exact_support_rate = static_cast<double>(exact) / n;
    for (auto& e : p.mean_eigenvalues) e /= n;
    p.mean_nmse_db = nmse_count ? linear_to_db(nmse_sum / static_cast<double>(nmse_count))
                                : std::numeric_limits<double>::quiet_NaN();
    std::sort(ka_hats.begin(), ka_hats.end());
    const std::size_t mid = ka_hats.size() / 2;
    p.median_ka_hat = ka_hats.size() % 2 ? static_cast<double>(ka_hats[mid])
                                         : 0.5 * static_cast<double>(ka_hats[mid - 1] + ka_hats[mid]);
    p.reports = std::move(reports);
    points.push_back(std::move(p));
  }
  return points;
}

std::string shortest_repr(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_csv(std::span<const SweepPoint> points) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& p : points) {
    for (const double v : {p.sweep_value, p.mean_decoded, p.miss_rate, p.fa_rate, p.mean_ka_hat, p.mean_nmse_db}) {
      out += shortest_repr(v);
      out += ',';
    }
    out += std::to_string(p.trials);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

void emit_csv(std::span<const SweepPoint> points, const std::filesystem::path& path) {
  write_file_atomic(path, format_csv(points));
}

std::vector<std::vector<double>> eigen_profiles(const ScenarioConfig& cfg, const ScenarioAssets& assets,
                                                std::uint64_t trial) {
  std::vector<std::vector<double>> out;
  for (const double value : cfg.sweep_points()) out.push_back(run_trial(cfg.at_point(value), assets, trial).eigenvalues);
  return out;
}

std::string format_eigen_csv(std::span<const double> sweep_values, std::span<const std::vector<double>> profiles) {
  if (sweep_values.size() != profiles.size()) throw DimensionError("format_eigen_csv: size mismatch");
  std::string out = "sweep_value";
  const std::size_t n = profiles.empty() ? 0 : profiles.front().size();
  for (std::size_t k = 1; k <= n; ++k) out += ",lambda_" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    out += shortest_repr(sweep_values[i]);
    for (const double v : profiles[i]) out += ',' + shortest_repr(v);
    out += '\n';
  }
  return out;
}

}  // namespace gfnoma
