#include "phash/prng.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "phash/encoding.hpp"

namespace phash {

namespace {

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c,
                          std::uint32_t& d) {
  a += b; d ^= a; d = std::rotl(d, 16);
  c += d; b ^= c; b = std::rotl(b, 12);
  a += b; d ^= a; d = std::rotl(d, 8);
  c += d; b ^= c; b = std::rotl(b, 7);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::array<std::uint32_t, 16> chacha_init(const Key& key, std::uint64_t nonce,
                                          std::uint64_t block_index) {
  std::array<std::uint32_t, 16> s{};
  s[0] = 0x61707865u;  // "expa"
  s[1] = 0x3320646eu;  // "nd 3"
  s[2] = 0x79622d32u;  // "2-by"
  s[3] = 0x6b206574u;  // "te k"
  const auto& kb = key.bytes();
  for (int i = 0; i < 8; ++i) {
    s[4 + i] = static_cast<std::uint32_t>(kb[4 * i]) |
               static_cast<std::uint32_t>(kb[4 * i + 1]) << 8 |
               static_cast<std::uint32_t>(kb[4 * i + 2]) << 16 |
               static_cast<std::uint32_t>(kb[4 * i + 3]) << 24;
  }
  s[12] = static_cast<std::uint32_t>(block_index);
  s[13] = static_cast<std::uint32_t>(block_index >> 32);
  s[14] = static_cast<std::uint32_t>(nonce);
  s[15] = static_cast<std::uint32_t>(nonce >> 32);
  return s;
}

std::array<std::uint32_t, 16> chacha_block(
    const std::array<std::uint32_t, 16>& state) {
  std::array<std::uint32_t, 16> x = state;
  for (int round = 0; round < 10; ++round) {
    quarter_round(x[0], x[4], x[8], x[12]);
    quarter_round(x[1], x[5], x[9], x[13]);
    quarter_round(x[2], x[6], x[10], x[14]);
    quarter_round(x[3], x[7], x[11], x[15]);
    quarter_round(x[0], x[5], x[10], x[15]);
    quarter_round(x[1], x[6], x[11], x[12]);
    quarter_round(x[2], x[7], x[8], x[13]);
    quarter_round(x[3], x[4], x[9], x[14]);
  }
  for (int i = 0; i < 16; ++i) x[i] += state[i];
  return x;
}

}  // namespace

Key Key::from_hex(std::string_view hex) {
  if (hex.size() != 2 * kBytes) {
    throw std::invalid_argument("key must be exactly 64 hex characters");
  }
  auto raw = hex_decode(hex);
  std::array<std::uint8_t, kBytes> bytes{};
  std::memcpy(bytes.data(), raw.data(), kBytes);
  return Key(bytes);
}

Key Key::from_seed(std::uint64_t seed) {
  std::array<std::uint8_t, kBytes> bytes{};
  std::uint64_t state = seed;
  for (int i = 0; i < 4; ++i) {
    std::uint64_t v = splitmix64(state);
    for (int j = 0; j < 8; ++j) {
      bytes[8 * i + j] = static_cast<std::uint8_t>(v >> (8 * j));
    }
  }
  return Key(bytes);
}

std::string Key::to_hex() const {
  return hex_encode(bytes_.data(), bytes_.size());
}

RandStream::RandStream(const Key& key, std::string_view domain_tag)
    : key_(key), domain_tag_(domain_tag) {
  state_ = chacha_init(key, fnv1a64(domain_tag), 0);
}

std::array<std::uint32_t, 16> RandStream::keystream_block(
    const Key& key, std::uint64_t nonce, std::uint64_t block_index) {
  return chacha_block(chacha_init(key, nonce, block_index));
}

void RandStream::refill() {
  buffer_ = chacha_block(state_);
  index_ = 0;
  if (++state_[12] == 0) ++state_[13];
}

std::uint32_t RandStream::next_u32() {
  if (index_ >= buffer_.size()) refill();
  ++consumed_;
  return buffer_[index_++];
}

std::uint64_t RandStream::next_u64() {
  std::uint64_t lo = next_u32();
  std::uint64_t hi = next_u32();
  return lo | hi << 32;
}

double RandStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandStream::next_uniform_int(std::uint64_t upper_exclusive) {
  if (upper_exclusive == 0) {
    throw std::invalid_argument("upper_exclusive must be at least 1");
  }
  // 2^64 mod n; rejection below this keeps the draw unbiased.
  std::uint64_t rem =
      (std::numeric_limits<std::uint64_t>::max() % upper_exclusive + 1) %
      upper_exclusive;
  std::uint64_t threshold = 0 - rem;
  for (;;) {
    std::uint64_t u = next_u64();
    if (rem == 0 || u < threshold) return u % upper_exclusive;
  }
}

double RandStream::next_gaussian() {
  double u1 = next_unit();
  double u2 = next_unit();
  double radius = std::sqrt(-2.0 * std::log1p(-u1));
  return radius * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::pair<int, int>> sample_rectangles(RandStream& stream,
                                                   int image_h, int image_w,
                                                   int count, int rect_h,
                                                   int rect_w) {
  if (rect_h < 1 || rect_w < 1 || rect_h > image_h || rect_w > image_w) {
    throw std::invalid_argument("rectangle does not fit inside the image");
  }
  if (count < 1) {
    throw std::invalid_argument("rectangle count must be at least 1");
  }
  std::vector<std::pair<int, int>> positions;
  positions.reserve(static_cast<std::size_t>(count));
  std::uint64_t top_range = static_cast<std::uint64_t>(image_h - rect_h) + 1;
  std::uint64_t left_range = static_cast<std::uint64_t>(image_w - rect_w) + 1;
  for (int i = 0; i < count; ++i) {
    int top = static_cast<int>(stream.next_uniform_int(top_range));
    int left = static_cast<int>(stream.next_uniform_int(left_range));
    positions.emplace_back(top, left);
  }
  return positions;
}

std::vector<int> sample_permutation(RandStream& stream, int n) {
  if (n < 0) throw std::invalid_argument("permutation size must be >= 0");
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(
        stream.next_uniform_int(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

}  // namespace phash
