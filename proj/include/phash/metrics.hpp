#pragma once

#include <array>
#include <string>
#include <vector>

#include "phash/blockhash.hpp"

namespace phash {

struct BerValue {
  int mismatches = 0;
  int total_bits = 0;
  double ber = 0.0;
};

/// Bit error rate between two hashes of equal length and algorithm tag.
/// Throws std::invalid_argument on mismatch.
BerValue ber(const BitHash& a, const BitHash& b);

struct DistributionStats {
  static constexpr int kBins = 50;  // 0.02-wide bins over [0, 1]

  int count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  std::array<int, kBins> histogram{};

  double stddev() const;
};

/// Statistics over a list of values in [0, 1].
DistributionStats stats_from_values(const std::vector<double>& values);

/// All C(n, 2) pairwise BERs of the given hashes. Throws
/// std::invalid_argument when fewer than 2 hashes are supplied.
DistributionStats pairwise_stats(const std::vector<BitHash>& hashes);

enum class VerdictLabel { same_content, tampered, distinct };

std::string verdict_label_name(VerdictLabel label);

struct Verdict {
  VerdictLabel label;
  double ber;
  double tau_low;
  double tau_high;
};

inline constexpr double kDefaultTauLow = 0.20;
inline constexpr double kDefaultTauHigh = 0.46;

/// Three-way threshold rule: ber < tau_low -> same_content;
/// tau_low <= ber < tau_high -> tampered; otherwise distinct.
/// Throws std::invalid_argument unless 0 <= tau_low < tau_high <= 1.
Verdict classify(double ber_value, double tau_low = kDefaultTauLow,
                 double tau_high = kDefaultTauHigh);

}  // namespace phash
