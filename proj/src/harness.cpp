#include "phash/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "phash/parallel.hpp"
#include "phash/version.hpp"

namespace phash {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::bdct_pca: return "bdct_pca";
    case Algorithm::svd_dctpca: return "svd_dctpca";
  }
  throw std::invalid_argument("unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "bdct_pca") return Algorithm::bdct_pca;
  if (name == "svd_dctpca") return Algorithm::svd_dctpca;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::vector<fs::path> list_corpus(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("corpus directory not found: " + dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<AttackSpec> resolve_suite(const std::string& suite) {
  if (suite == "table1") return table1_suite();
  return load_attack_suite(suite);
}

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%T", std::gmtime(&now));
  return std::string(buf) + "Z";
}

ordered_json make_report_header(const RunConfig& config,
                                const std::string& command) {
  ordered_json report;
  report["report_version"] = 1;
  report["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  report["command"] = command;
  ordered_json cfg;
  cfg["corpus"] = config.corpus_dir;
  cfg["key"] = config.key_hex;
  cfg["algorithm"] = algorithm_name(config.algorithm);
  cfg["suite"] = config.attack_suite;
  cfg["tau_low"] = config.tau_low;
  cfg["tau_high"] = config.tau_high;
  cfg["deterministic"] = config.deterministic;
  if (config.algorithm == Algorithm::svd_dctpca) {
    cfg["spectral_params"] = {
        {"p", config.spectral.p},       {"m", config.spectral.m},
        {"r", config.spectral.r},       {"d", config.spectral.d},
        {"f_min", config.spectral.f_min}, {"f_max", config.spectral.f_max},
        {"smooth", config.spectral.smooth},
        {"stage2_mode", config.spectral.stage2_mode == Stage2Mode::whole_image
                            ? "whole_image"
                            : "rectangles"}};
  }
  report["config"] = cfg;
  if (!config.deterministic) report["timestamp"] = iso_timestamp();
  return report;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << text;
}

void write_report_files(const RunConfig& config, const std::string& stem,
                        const ordered_json& report, const std::string& csv,
                        const std::string& csv_suffix) {
  if (config.output_dir.empty()) return;
  fs::create_directories(config.output_dir);
  fs::path base = fs::path(config.output_dir);
  write_text_file(base / (stem + ".json"), report.dump(2) + "\n");
  write_text_file(base / (stem + csv_suffix), csv);
}

// Holds either the bit hashes or the spectral hashes of a corpus.
struct CorpusHashes {
  std::vector<fs::path> files;
  std::vector<LumaImage> images;
  std::vector<BitHash> bit_hashes;
  std::vector<SpectralHash> spectral_hashes;
};

CorpusHashes hash_corpus(const RunConfig& config, std::size_t min_images) {
  CorpusHashes corpus;
  corpus.files = list_corpus(config.corpus_dir);
  if (corpus.files.size() < min_images) {
    throw std::runtime_error("corpus must contain at least " +
                             std::to_string(min_images) +
                             " decodable images, found " +
                             std::to_string(corpus.files.size()));
  }
  Key key = Key::from_hex(config.key_hex);
  int n = static_cast<int>(corpus.files.size());
  corpus.images.reserve(corpus.files.size());
  // Decode serially (decode errors should surface with the file name),
  // then hash in parallel.
  for (const auto& path : corpus.files) {
    corpus.images.push_back(load_image(path.string()));
  }
  if (config.algorithm == Algorithm::bdct_pca) {
    std::vector<BitHash> hashes(static_cast<std::size_t>(n),
                                BitHash(std::vector<std::uint8_t>(640, 0)));
    parallel_for(n, config.workers, [&](int i) {
      hashes[static_cast<std::size_t>(i)] =
          hash_image(corpus.images[static_cast<std::size_t>(i)]);
    });
    corpus.bit_hashes = std::move(hashes);
  } else {
    std::vector<SpectralHash> hashes(static_cast<std::size_t>(n));
    parallel_for(n, config.workers, [&](int i) {
      hashes[static_cast<std::size_t>(i)] = hash_spectral(
          corpus.images[static_cast<std::size_t>(i)], key, config.spectral);
    });
    corpus.spectral_hashes = std::move(hashes);
  }
  return corpus;
}

std::string format_double(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<HashLine> hash_files(const std::vector<std::string>& paths,
                                 const RunConfig& config) {
  Key key = Key::from_hex(config.key_hex);
  std::vector<HashLine> lines(paths.size());
  parallel_for(static_cast<int>(paths.size()), config.workers, [&](int i) {
    auto& line = lines[static_cast<std::size_t>(i)];
    line.path = paths[static_cast<std::size_t>(i)];
    try {
      LumaImage img = load_image(line.path);
      if (config.algorithm == Algorithm::bdct_pca) {
        line.hash = hash_image(img).to_string();
      } else {
        line.hash = hash_spectral(img, key, config.spectral).to_string();
      }
    } catch (const std::exception& e) {
      line.error = e.what();
    }
  });
  return lines;
}

nlohmann::ordered_json cmd_robustness(const RunConfig& config) {
  Timer timer;
  std::vector<AttackSpec> suite = resolve_suite(config.attack_suite);
  if (config.debug_identity) {
    AttackSpec identity;
    identity.kind = AttackKind::contrast;
    identity.magnitude = 0.0;
    suite.push_back(identity);
  }

  CorpusHashes corpus = hash_corpus(config, 1);
  Key key = Key::from_hex(config.key_hex);
  int n = static_cast<int>(corpus.files.size());
  bool spectral = config.algorithm == Algorithm::svd_dctpca;
  std::string metric = spectral ? "spectral_distance" : "ber";

  ordered_json report = make_report_header(config, "robustness");
  ordered_json images = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    ordered_json rec;
    rec["image"] = corpus.files[static_cast<std::size_t>(i)].filename().string();
    rec["hash"] = spectral
                      ? corpus.spectral_hashes[static_cast<std::size_t>(i)].to_string()
                      : corpus.bit_hashes[static_cast<std::size_t>(i)].to_string();
    images.push_back(rec);
  }
  report["images"] = images;
  report["metric"] = metric;

  std::string csv = "attack," + metric + "_mean," + metric + "_min," +
                    metric + "_max\n";
  ordered_json attacks = ordered_json::array();
  for (const auto& spec : suite) {
    std::vector<double> values(static_cast<std::size_t>(n), 0.0);
    parallel_for(n, config.workers, [&](int i) {
      LumaImage attacked =
          apply(corpus.images[static_cast<std::size_t>(i)], spec);
      if (spectral) {
        SpectralHash h = hash_spectral(attacked, key, config.spectral);
        values[static_cast<std::size_t>(i)] = spectral_distance(
            corpus.spectral_hashes[static_cast<std::size_t>(i)], h);
      } else {
        BitHash h = hash_image(attacked);
        values[static_cast<std::size_t>(i)] =
            ber(corpus.bit_hashes[static_cast<std::size_t>(i)], h).ber;
      }
    });
    double sum = 0.0, vmin = values[0], vmax = values[0];
    for (double v : values) {
      sum += v;
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    double mean = sum / n;

    ordered_json row;
    row["name"] = spec.name();
    row["spec"] = spec.to_json();
    row["mean"] = mean;
    row["min"] = vmin;
    row["max"] = vmax;
    ordered_json per_image = ordered_json::array();
    for (int i = 0; i < n; ++i) {
      per_image.push_back(
          {{"image",
            corpus.files[static_cast<std::size_t>(i)].filename().string()},
           {"value", values[static_cast<std::size_t>(i)]}});
    }
    row["per_image"] = per_image;
    attacks.push_back(row);
    csv += spec.name() + "," + format_double(mean) + "," +
           format_double(vmin) + "," + format_double(vmax) + "\n";
  }
  report["attacks"] = attacks;
  if (!config.deterministic) report["wall_clock_seconds"] = timer.seconds();

  write_report_files(config, "robustness", report, csv, ".csv");
  return report;
}

nlohmann::ordered_json cmd_discrimination(const RunConfig& config) {
  Timer timer;
  CorpusHashes corpus = hash_corpus(config, 2);
  int n = static_cast<int>(corpus.files.size());
  bool spectral = config.algorithm == Algorithm::svd_dctpca;

  DistributionStats stats;
  if (spectral) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        values.push_back(
            spectral_distance(corpus.spectral_hashes[static_cast<std::size_t>(i)],
                              corpus.spectral_hashes[static_cast<std::size_t>(j)]));
      }
    }
    stats = stats_from_values(values);
  } else {
    stats = pairwise_stats(corpus.bit_hashes);
  }

  ordered_json report = make_report_header(config, "discrimination");
  report["image_count"] = n;
  report["pair_count"] = stats.count;
  report["mean"] = stats.mean;
  report["variance"] = stats.variance;
  report["stddev"] = stats.stddev();
  ordered_json hist = ordered_json::array();
  for (int b = 0; b < DistributionStats::kBins; ++b) {
    hist.push_back(stats.histogram[static_cast<std::size_t>(b)]);
  }
  report["histogram"] = hist;
  report["reference_gaussian"] = {{"mean", 0.5}, {"variance", 0.0009}};

  // Figure-3 data: bin centers, observed counts, reference Gaussian density.
  std::string csv = "bin_center,count,ref_density\n";
  const double ref_mu = 0.5, ref_var = 0.0009;
  for (int b = 0; b < DistributionStats::kBins; ++b) {
    double center = (b + 0.5) * 0.02;
    double z = center - ref_mu;
    double density = std::exp(-z * z / (2.0 * ref_var)) /
                     std::sqrt(2.0 * std::numbers::pi * ref_var);
    csv += format_double(center, 2) + "," +
           std::to_string(stats.histogram[static_cast<std::size_t>(b)]) + "," +
           format_double(density) + "\n";
  }
  if (!config.deterministic) report["wall_clock_seconds"] = timer.seconds();

  write_report_files(config, "discrimination", report, csv, "_hist.csv");
  return report;
}

nlohmann::ordered_json cmd_tamper(const RunConfig& config) {
  if (config.algorithm != Algorithm::bdct_pca) {
    throw std::invalid_argument(
        "tamper classification is defined for the bdct_pca bit hash");
  }
  Timer timer;
  CorpusHashes corpus = hash_corpus(config, 1);
  int n = static_cast<int>(corpus.files.size());

  AttackSpec logo;
  logo.kind = AttackKind::logo;
  logo.magnitude = 0.10;

  std::vector<double> tamper_ber(static_cast<std::size_t>(n), 0.0);
  parallel_for(n, config.workers, [&](int i) {
    LumaImage tampered = apply(corpus.images[static_cast<std::size_t>(i)], logo);
    tamper_ber[static_cast<std::size_t>(i)] =
        ber(corpus.bit_hashes[static_cast<std::size_t>(i)],
            hash_image(tampered))
            .ber;
  });

  ordered_json report = make_report_header(config, "tamper");
  report["logo_spec"] = logo.to_json();

  ordered_json pairs = ordered_json::array();
  std::string csv = "index,image,ber,label\n";
  for (int i = 0; i < n; ++i) {
    double b = tamper_ber[static_cast<std::size_t>(i)];
    Verdict v = classify(b, config.tau_low, config.tau_high);
    std::string name = corpus.files[static_cast<std::size_t>(i)].filename().string();
    pairs.push_back({{"image", name},
                     {"ber", b},
                     {"label", verdict_label_name(v.label)}});
    csv += std::to_string(i) + "," + name + "," + format_double(b) + "," +
           verdict_label_name(v.label) + "\n";
  }
  report["tampered_pairs"] = pairs;

  // Controls: image vs itself, and image vs the next distinct image.
  ordered_json same_controls = ordered_json::array();
  ordered_json distinct_controls = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    const auto& h = corpus.bit_hashes[static_cast<std::size_t>(i)];
    double self_ber = ber(h, h).ber;
    Verdict self_v = classify(self_ber, config.tau_low, config.tau_high);
    same_controls.push_back(
        {{"image", corpus.files[static_cast<std::size_t>(i)].filename().string()},
         {"ber", self_ber},
         {"label", verdict_label_name(self_v.label)}});
    if (n >= 2) {
      int j = (i + 1) % n;
      double d_ber =
          ber(h, corpus.bit_hashes[static_cast<std::size_t>(j)]).ber;
      Verdict d_v = classify(d_ber, config.tau_low, config.tau_high);
      distinct_controls.push_back(
          {{"image_a",
            corpus.files[static_cast<std::size_t>(i)].filename().string()},
           {"image_b",
            corpus.files[static_cast<std::size_t>(j)].filename().string()},
           {"ber", d_ber},
           {"label", verdict_label_name(d_v.label)}});
    }
  }
  report["same_content_controls"] = same_controls;
  report["distinct_controls"] = distinct_controls;
  if (!config.deterministic) report["wall_clock_seconds"] = timer.seconds();

  write_report_files(config, "tamper", report, csv, "_ber.csv");
  return report;
}

}  // namespace phash
