#include "phash/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phash {

BerValue ber(const BitHash& a, const BitHash& b) {
  if (a.bits().size() != b.bits().size()) {
    throw std::invalid_argument("hash lengths differ");
  }
  if (a.algorithm_tag() != b.algorithm_tag()) {
    throw std::invalid_argument("hash algorithm tags differ: " +
                                a.algorithm_tag() + " vs " + b.algorithm_tag());
  }
  BerValue result;
  result.total_bits = static_cast<int>(a.bits().size());
  for (std::size_t i = 0; i < a.bits().size(); ++i) {
    result.mismatches += a.bits()[i] != b.bits()[i];
  }
  result.ber = static_cast<double>(result.mismatches) / result.total_bits;
  return result;
}

double DistributionStats::stddev() const { return std::sqrt(variance); }

DistributionStats stats_from_values(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("cannot compute stats of an empty list");
  }
  DistributionStats stats;
  stats.count = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / stats.count;
  double ss = 0.0;
  for (double v : values) {
    double d = v - stats.mean;
    ss += d * d;
  }
  stats.variance = stats.count > 1 ? ss / (stats.count - 1) : 0.0;
  for (double v : values) {
    int bin = static_cast<int>(v / 0.02);
    bin = std::max(0, std::min(DistributionStats::kBins - 1, bin));
    ++stats.histogram[static_cast<std::size_t>(bin)];
  }
  return stats;
}

DistributionStats pairwise_stats(const std::vector<BitHash>& hashes) {
  if (hashes.size() < 2) {
    throw std::invalid_argument("pairwise stats need at least 2 hashes");
  }
  std::vector<double> bers;
  bers.reserve(hashes.size() * (hashes.size() - 1) / 2);
  for (std::size_t i = 0; i < hashes.size(); ++i) {
    for (std::size_t j = i + 1; j < hashes.size(); ++j) {
      bers.push_back(ber(hashes[i], hashes[j]).ber);
    }
  }
  return stats_from_values(bers);
}

std::string verdict_label_name(VerdictLabel label) {
  switch (label) {
    case VerdictLabel::same_content: return "same_content";
    case VerdictLabel::tampered: return "tampered";
    case VerdictLabel::distinct: return "distinct";
  }
  throw std::invalid_argument("unknown verdict label");
}

Verdict classify(double ber_value, double tau_low, double tau_high) {
  if (!(tau_low >= 0.0 && tau_low < tau_high && tau_high <= 1.0)) {
    throw std::invalid_argument("thresholds must satisfy 0 <= tau_low < tau_high <= 1");
  }
  VerdictLabel label;
  if (ber_value < tau_low) {
    label = VerdictLabel::same_content;
  } else if (ber_value < tau_high) {
    label = VerdictLabel::tampered;
  } else {
    label = VerdictLabel::distinct;
  }
  return Verdict{label, ber_value, tau_low, tau_high};
}

}  // namespace phash
