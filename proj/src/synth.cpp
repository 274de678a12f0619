#include "phash/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <vector>

#include "phash/prng.hpp"

namespace phash {

namespace {

// Coarse value-noise grid, bilinearly upsampled.
void add_smooth_noise(std::vector<double>& pix, int h, int w, double amplitude,
                      RandStream& rs) {
  constexpr int kGrid = 9;
  double grid[kGrid][kGrid];
  for (auto& row : grid) {
    for (double& v : row) v = amplitude * (2.0 * rs.next_unit() - 1.0);
  }
  for (int r = 0; r < h; ++r) {
    double gy = static_cast<double>(r) / (h - 1) * (kGrid - 1);
    int y0 = std::min(static_cast<int>(gy), kGrid - 2);
    double ty = gy - y0;
    for (int c = 0; c < w; ++c) {
      double gx = static_cast<double>(c) / (w - 1) * (kGrid - 1);
      int x0 = std::min(static_cast<int>(gx), kGrid - 2);
      double tx = gx - x0;
      double top = (1 - tx) * grid[y0][x0] + tx * grid[y0][x0 + 1];
      double bot = (1 - tx) * grid[y0 + 1][x0] + tx * grid[y0 + 1][x0 + 1];
      pix[static_cast<std::size_t>(r) * w + c] += (1 - ty) * top + ty * bot;
    }
  }
}

}  // namespace

LumaImage synth_image(std::uint64_t index, int height, int width) {
  RandStream rs(Key::from_seed(0x9d2c5680u ^ index), "synth");
  std::vector<double> pix(static_cast<std::size_t>(height) * width, 0.0);

  // Low-frequency cosine gradients set the global layout; a few
  // mid-frequency waves guarantee oriented detail in every image.
  int waves = 2 + static_cast<int>(rs.next_uniform_int(3));
  int detail_waves = 2 + static_cast<int>(rs.next_uniform_int(3));
  for (int k = 0; k < waves + detail_waves; ++k) {
    bool detail = k >= waves;
    double fx, fy, amp;
    if (detail) {
      fx = static_cast<double>(4 + rs.next_uniform_int(10));
      fy = static_cast<double>(4 + rs.next_uniform_int(10));
      amp = 12.0 + 18.0 * rs.next_unit();
    } else {
      fx = static_cast<double>(rs.next_uniform_int(4));
      fy = static_cast<double>(rs.next_uniform_int(4));
      if (fx == 0.0 && fy == 0.0) fx = 1.0;
      amp = 35.0 + 40.0 * rs.next_unit();
    }
    double phase = 2.0 * std::numbers::pi * rs.next_unit();
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        double arg = 2.0 * std::numbers::pi *
                         (fx * c / width + fy * r / height) +
                     phase;
        pix[static_cast<std::size_t>(r) * width + c] += amp * std::cos(arg);
      }
    }
  }

  // Opaque shapes with feathered edges, like out-of-focus photo subjects.
  int shapes = 5 + static_cast<int>(rs.next_uniform_int(6));
  for (int s = 0; s < shapes; ++s) {
    bool ellipse = rs.next_u32() & 1;
    double cy = height * rs.next_unit();
    double cx = width * rs.next_unit();
    double ry = height * (0.06 + 0.18 * rs.next_unit());
    double rx = width * (0.06 + 0.18 * rs.next_unit());
    double delta = (40.0 + 70.0 * rs.next_unit()) * ((rs.next_u32() & 1) ? 1.0 : -1.0);
    double feather = 2.0 + 6.0 * rs.next_unit();  // soft edge width in pixels
    int pad = static_cast<int>(feather) + 1;
    int r0 = std::max(0, static_cast<int>(cy - ry) - pad);
    int r1 = std::min(height, static_cast<int>(cy + ry) + pad + 1);
    int c0 = std::max(0, static_cast<int>(cx - rx) - pad);
    int c1 = std::min(width, static_cast<int>(cx + rx) + pad + 1);
    for (int r = r0; r < r1; ++r) {
      for (int c = c0; c < c1; ++c) {
        // Signed distance to the shape boundary, in pixels (approximate for
        // ellipses, exact for rectangles).
        double dist;
        if (ellipse) {
          double dy = (r - cy) / ry;
          double dx = (c - cx) / rx;
          double rho = std::sqrt(dy * dy + dx * dx);
          dist = (1.0 - rho) * std::min(rx, ry);
        } else {
          double dy = ry - std::abs(r - cy);
          double dx = rx - std::abs(c - cx);
          dist = std::min(dy, dx);
        }
        double t = (dist + feather) / (2.0 * feather);
        if (t <= 0.0) continue;
        if (t > 1.0) t = 1.0;
        double blend = t * t * (3.0 - 2.0 * t);  // smoothstep
        pix[static_cast<std::size_t>(r) * width + c] += delta * blend;
      }
    }
  }

  add_smooth_noise(pix, height, width, 10.0 + 14.0 * rs.next_unit(), rs);

  // Film-like grain keeps every block's histogram spread across levels.
  double grain = 8.0 + 6.0 * rs.next_unit();
  for (double& v : pix) v += grain * rs.next_gaussian();

  // Normalize into a wide gray range with headroom for contrast attacks.
  auto [mn_it, mx_it] = std::minmax_element(pix.begin(), pix.end());
  double mn = *mn_it, mx = *mx_it;
  double span = mx - mn;
  if (span < 1.0) span = 1.0;
  for (double& v : pix) v = 20.0 + 215.0 * (v - mn) / span;

  return LumaImage(height, width, std::move(pix));
}

void write_synth_corpus(const std::string& dir, int count, int size,
                        std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "synth_%04d.png", i);
    LumaImage img = synth_image(seed + static_cast<std::uint64_t>(i), size, size);
    write_png_gray((std::filesystem::path(dir) / name).string(), img);
  }
}

}  // namespace phash
