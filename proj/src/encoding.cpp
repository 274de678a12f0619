#include "phash/encoding.hpp"

#include <array>
#include <stdexcept>

namespace phash {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";
constexpr char kB64Digits[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("invalid hex character");
}

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  throw std::invalid_argument("invalid base64 character");
}

}  // namespace

std::string hex_encode(const std::uint8_t* data, std::size_t size) {
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(kHexDigits[data[i] >> 4]);
    out.push_back(kHexDigits[data[i] & 0x0f]);
  }
  return out;
}

std::vector<std::uint8_t> hex_decode(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw std::invalid_argument("hex string must have even length");
  }
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(hex_value(hex[2 * i]) << 4 |
                                       hex_value(hex[2 * i + 1]));
  }
  return out;
}

std::string base64_encode(const std::uint8_t* data, std::size_t size) {
  std::string out;
  out.reserve((size + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= size; i += 3) {
    std::uint32_t v = data[i] << 16 | data[i + 1] << 8 | data[i + 2];
    out.push_back(kB64Digits[v >> 18 & 0x3f]);
    out.push_back(kB64Digits[v >> 12 & 0x3f]);
    out.push_back(kB64Digits[v >> 6 & 0x3f]);
    out.push_back(kB64Digits[v & 0x3f]);
  }
  std::size_t rem = size - i;
  if (rem == 1) {
    std::uint32_t v = data[i] << 16;
    out.push_back(kB64Digits[v >> 18 & 0x3f]);
    out.push_back(kB64Digits[v >> 12 & 0x3f]);
    out.append("==");
  } else if (rem == 2) {
    std::uint32_t v = data[i] << 16 | data[i + 1] << 8;
    out.push_back(kB64Digits[v >> 18 & 0x3f]);
    out.push_back(kB64Digits[v >> 12 & 0x3f]);
    out.push_back(kB64Digits[v >> 6 & 0x3f]);
    out.push_back('=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw std::invalid_argument("base64 length must be a multiple of 4");
  }
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int pad = 0;
    std::uint32_t v = 0;
    for (int j = 0; j < 4; ++j) {
      char c = text[i + j];
      if (c == '=') {
        if (i + 4 != text.size() || j < 2) {
          throw std::invalid_argument("misplaced base64 padding");
        }
        ++pad;
        v <<= 6;
      } else {
        if (pad > 0) throw std::invalid_argument("misplaced base64 padding");
        v = v << 6 | static_cast<std::uint32_t>(b64_value(c));
      }
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

}  // namespace phash
