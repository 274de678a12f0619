#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace phash {

/// 32-byte secret key driving every pseudo-random choice in the keyed
/// pipeline. Two distinct keys yield statistically independent streams.
class Key {
 public:
  static constexpr std::size_t kBytes = 32;

  Key() = default;  // all-zero key
  explicit Key(const std::array<std::uint8_t, kBytes>& bytes) : bytes_(bytes) {}

  /// Parses exactly 64 hex characters; throws std::invalid_argument otherwise.
  static Key from_hex(std::string_view hex);

  /// Expands a 64-bit seed into a full key (splitmix64 expansion). Intended
  /// for tests and seeded noise, not for secret keys.
  static Key from_seed(std::uint64_t seed);

  std::string to_hex() const;
  const std::array<std::uint8_t, kBytes>& bytes() const { return bytes_; }

  friend bool operator==(const Key&, const Key&) = default;

 private:
  std::array<std::uint8_t, kBytes> bytes_{};
};

/// Deterministic keystream reader. The stream is the ChaCha20 keystream for
/// (key, nonce = FNV-1a64(domain_tag)); identical (key, tag) always replays
/// the identical sequence, and distinct tags give non-overlapping streams
/// from one key. Single-owner while being advanced; create one stream per
/// worker with distinct tags for parallel use.
class RandStream {
 public:
  RandStream(const Key& key, std::string_view domain_tag);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on [0,1) with 53 random bits.
  double next_unit();

  /// Unbiased uniform draw in [0, upper_exclusive) via rejection sampling.
  /// Throws std::invalid_argument if upper_exclusive is 0.
  std::uint64_t next_uniform_int(std::uint64_t upper_exclusive);

  /// Standard normal deviate (Box-Muller; consumes two unit draws).
  double next_gaussian();

  /// Number of 32-bit keystream words consumed so far.
  std::uint64_t counter() const { return consumed_; }

  const std::string& domain_tag() const { return domain_tag_; }
  const Key& key() const { return key_; }

  /// Raw keystream block access, used by the golden-vector regression test.
  static std::array<std::uint32_t, 16> keystream_block(
      const Key& key, std::uint64_t nonce, std::uint64_t block_index);

 private:
  void refill();

  Key key_;
  std::string domain_tag_;
  std::array<std::uint32_t, 16> state_{};
  std::array<std::uint32_t, 16> buffer_{};
  std::size_t index_ = 16;
  std::uint64_t consumed_ = 0;
};

/// Draws `count` (top, left) positions such that a rect_h x rect_w rectangle
/// placed there lies fully inside an image_h x image_w image. Overlap is
/// permitted; order is the draw order. Throws std::invalid_argument when the
/// rectangle does not fit or count < 1.
std::vector<std::pair<int, int>> sample_rectangles(RandStream& stream,
                                                   int image_h, int image_w,
                                                   int count, int rect_h,
                                                   int rect_w);

/// Fisher-Yates permutation of [0, n).
std::vector<int> sample_permutation(RandStream& stream, int n);

}  // namespace phash
