#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "phash/attacks.hpp"
#include "phash/blockhash.hpp"
#include "phash/metrics.hpp"
#include "phash/spectral.hpp"

namespace phash {

enum class Algorithm { bdct_pca, svd_dctpca };

std::string algorithm_name(Algorithm algorithm);
Algorithm algorithm_from_name(const std::string& name);

struct RunConfig {
  std::string corpus_dir;
  std::string key_hex = std::string(64, '0');
  Algorithm algorithm = Algorithm::bdct_pca;
  std::string attack_suite = "table1";
  double tau_low = kDefaultTauLow;
  double tau_high = kDefaultTauHigh;
  std::string output_dir;
  int workers = 1;
  bool deterministic = false;
  bool debug_identity = false;  // appends a contrast-0 identity row
  SpectralParams spectral;
};

/// Decodable image files (.png/.jpg/.jpeg/.bmp, case-insensitive) in a
/// directory, sorted by path.
std::vector<std::filesystem::path> list_corpus(const std::string& dir);

/// "table1" or a path to a JSON attack suite.
std::vector<AttackSpec> resolve_suite(const std::string& suite);

struct HashLine {
  std::string path;
  std::string hash;   // empty on failure
  std::string error;  // empty on success
};

/// Hashes each file; per-file failures are reported, not thrown.
std::vector<HashLine> hash_files(const std::vector<std::string>& paths,
                                 const RunConfig& config);

/// Robustness run: per attack, metric between each original and
/// its attacked version (BER for bdct_pca, spectral distance for svd_dctpca).
/// Writes robustness.json and robustness.csv into output_dir (when set) and
/// returns the report.
nlohmann::ordered_json cmd_robustness(const RunConfig& config);

/// All-pairs discrimination statistics plus the Figure-3 histogram CSV
/// (bin_center, count, ref_density). Writes discrimination.json and
/// discrimination_hist.csv.
nlohmann::ordered_json cmd_discrimination(const RunConfig& config);

/// Logo-tamper detection: per image, BER between the original and its
/// logo-tampered version with a three-way verdict, plus same/distinct control
/// pairs. Writes tamper.json and tamper_ber.csv. bdct_pca only.
nlohmann::ordered_json cmd_tamper(const RunConfig& config);

}  // namespace phash
