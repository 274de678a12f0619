#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "phash/linalg.hpp"

namespace phash {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rectangular luminance matrix, values in [0, 255], at least 8x8.
class LumaImage {
 public:
  LumaImage(int height, int width);
  LumaImage(int height, int width, std::vector<double> pixels);

  int height() const { return height_; }
  int width() const { return width_; }
  double at(int r, int c) const {
    return pixels_[static_cast<std::size_t>(r) * width_ + c];
  }
  double& at(int r, int c) {
    return pixels_[static_cast<std::size_t>(r) * width_ + c];
  }
  const std::vector<double>& pixels() const { return pixels_; }
  std::vector<double>& pixels() { return pixels_; }

  Matrix to_matrix() const;

 private:
  int height_;
  int width_;
  std::vector<double> pixels_;
};

/// The 64x64 standardized image every bit-hash is computed from.
struct StandardImage {
  static constexpr int kSize = 64;
  std::vector<double> pixels;  // row-major, kSize * kSize

  double at(int r, int c) const {
    return pixels[static_cast<std::size_t>(r) * kSize + c];
  }
  LumaImage to_luma() const { return LumaImage(kSize, kSize, pixels); }
};

/// Decodes PNG, JPEG or BMP bytes to luminance. Color inputs are converted
/// with BT.601 weights (Y = 0.299 R + 0.587 G + 0.114 B); grayscale inputs
/// pass through exactly. Throws DecodeError on undecodable bytes.
LumaImage decode_image(const std::uint8_t* data, std::size_t size);
LumaImage decode_image(const std::vector<std::uint8_t>& bytes);
LumaImage load_image(const std::string& path);

/// Separable resampling: exact box averaging when shrinking an axis,
/// bilinear interpolation when stretching it. Same-size axes are copied
/// verbatim, so resizing to the current size is the identity.
LumaImage resize(const LumaImage& img, int out_height, int out_width);

/// Warps any luminance image to the 64x64 standardized image.
StandardImage standardize(const LumaImage& img);

/// Baseline grayscale JPEG round-trip support. quality in [1, 100].
std::vector<std::uint8_t> encode_jpeg_gray(const LumaImage& img, int quality);

/// 8-bit grayscale PNG writer (pixels rounded to the nearest level).
void write_png_gray(const std::string& path, const LumaImage& img);

}  // namespace phash
