#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phash/image.hpp"

namespace phash {

LumaImage::LumaImage(int height, int width)
    : height_(height),
      width_(width),
      pixels_(static_cast<std::size_t>(std::max(height, 0)) *
              static_cast<std::size_t>(std::max(width, 0))) {
  if (height_ < 8 || width_ < 8) {
    throw std::invalid_argument("image must be at least 8x8");
  }
}

LumaImage::LumaImage(int height, int width, std::vector<double> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
  if (height_ < 8 || width_ < 8) {
    throw std::invalid_argument("image must be at least 8x8");
  }
  if (pixels_.size() != static_cast<std::size_t>(height_) * width_) {
    throw std::invalid_argument("pixel buffer does not match dimensions");
  }
}

Matrix LumaImage::to_matrix() const {
  return Matrix(height_, width_, pixels_);
}

namespace {

// 1D resample of `count` parallel lines stored with the given strides.
// Shrinking uses exact box integration; stretching uses linear interpolation
// with half-pixel centers; equal sizes copy verbatim.
void resample_lines(const double* src, double* dst, int in_len, int out_len,
                    int count, std::size_t src_line_stride,
                    std::size_t src_elem_stride, std::size_t dst_line_stride,
                    std::size_t dst_elem_stride) {
  if (in_len == out_len) {
    for (int line = 0; line < count; ++line) {
      const double* s = src + line * src_line_stride;
      double* d = dst + line * dst_line_stride;
      for (int i = 0; i < out_len; ++i) {
        d[i * dst_elem_stride] = s[i * src_elem_stride];
      }
    }
    return;
  }
  if (out_len < in_len) {
    double scale = static_cast<double>(in_len) / out_len;
    for (int i = 0; i < out_len; ++i) {
      double a = i * scale;
      double b = (i + 1) * scale;
      int j0 = static_cast<int>(std::floor(a));
      int j1 = std::min(static_cast<int>(std::ceil(b)), in_len);
      for (int line = 0; line < count; ++line) {
        const double* s = src + line * src_line_stride;
        double sum = 0.0;
        double wsum = 0.0;
        for (int j = j0; j < j1; ++j) {
          double w = std::min(b, j + 1.0) - std::max(a, static_cast<double>(j));
          if (w <= 0.0) continue;
          sum += w * s[j * src_elem_stride];
          wsum += w;
        }
        dst[line * dst_line_stride + i * dst_elem_stride] = sum / wsum;
      }
    }
    return;
  }
  double scale = static_cast<double>(in_len) / out_len;
  for (int i = 0; i < out_len; ++i) {
    double x = (i + 0.5) * scale - 0.5;
    int j0 = static_cast<int>(std::floor(x));
    double t = x - j0;
    int ja = std::clamp(j0, 0, in_len - 1);
    int jb = std::clamp(j0 + 1, 0, in_len - 1);
    for (int line = 0; line < count; ++line) {
      const double* s = src + line * src_line_stride;
      dst[line * dst_line_stride + i * dst_elem_stride] =
          (1.0 - t) * s[ja * src_elem_stride] + t * s[jb * src_elem_stride];
    }
  }
}

}  // namespace

LumaImage resize(const LumaImage& img, int out_height, int out_width) {
  if (out_height < 8 || out_width < 8) {
    throw std::invalid_argument("resize target must be at least 8x8");
  }
  int in_h = img.height();
  int in_w = img.width();
  // Horizontal pass.
  std::vector<double> horiz(static_cast<std::size_t>(in_h) * out_width);
  resample_lines(img.pixels().data(), horiz.data(), in_w, out_width, in_h,
                 static_cast<std::size_t>(in_w), 1,
                 static_cast<std::size_t>(out_width), 1);
  // Vertical pass over columns.
  std::vector<double> out(static_cast<std::size_t>(out_height) * out_width);
  resample_lines(horiz.data(), out.data(), in_h, out_height, out_width, 1,
                 static_cast<std::size_t>(out_width), 1,
                 static_cast<std::size_t>(out_width));
  return LumaImage(out_height, out_width, std::move(out));
}

StandardImage standardize(const LumaImage& img) {
  LumaImage resized = resize(img, StandardImage::kSize, StandardImage::kSize);
  StandardImage out;
  out.pixels = resized.pixels();
  for (double& v : out.pixels) {
    v = std::clamp(v, 0.0, 255.0);
  }
  return out;
}

}  // namespace phash
