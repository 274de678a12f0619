#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace phash {

/// Lowercase hex encoding of raw bytes.
std::string hex_encode(const std::uint8_t* data, std::size_t size);

/// Decodes a hex string (either case). Throws std::invalid_argument on odd
/// length or non-hex characters.
std::vector<std::uint8_t> hex_decode(std::string_view hex);

/// Standard base64 (RFC 4648, with padding).
std::string base64_encode(const std::uint8_t* data, std::size_t size);

/// Throws std::invalid_argument on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace phash
