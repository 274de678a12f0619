#include "phash/attacks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "phash/prng.hpp"

namespace phash {

namespace {

double clamp255(double v) { return std::clamp(v, 0.0, 255.0); }

LumaImage apply_contrast(const LumaImage& img, double alpha) {
  if (alpha < -0.5 || alpha > 0.5) {
    throw std::invalid_argument("contrast magnitude must be in [-0.5, 0.5]");
  }
  if (alpha == 0.0) return img;  // exact identity
  LumaImage out(img.height(), img.width());
  for (std::size_t i = 0; i < out.pixels().size(); ++i) {
    out.pixels()[i] = clamp255(128.0 + (1.0 + alpha) * (img.pixels()[i] - 128.0));
  }
  return out;
}

LumaImage apply_median_filter(const LumaImage& img) {
  LumaImage out(img.height(), img.width());
  int h = img.height(), w = img.width();
  std::array<double, 9> window;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      int n = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          int rr = std::clamp(r + dr, 0, h - 1);
          int cc = std::clamp(c + dc, 0, w - 1);
          window[static_cast<std::size_t>(n++)] = img.at(rr, cc);
        }
      }
      std::nth_element(window.begin(), window.begin() + 4, window.end());
      out.at(r, c) = window[4];
    }
  }
  return out;
}

LumaImage apply_jpeg(const LumaImage& img, double degradation) {
  if (degradation < 0.0 || degradation > 99.0) {
    throw std::invalid_argument("jpeg degradation must be in [0, 99]");
  }
  int quality = 100 - static_cast<int>(std::lround(degradation));
  auto bytes = encode_jpeg_gray(img, quality);
  return decode_image(bytes);
}

LumaImage apply_gaussian_noise(const LumaImage& img, double sigma,
                               std::uint64_t seed) {
  if (sigma <= 0.0 || sigma > 64.0) {
    throw std::invalid_argument("gaussian sigma must be in (0, 64]");
  }
  RandStream stream(Key::from_seed(seed), "gaussian");
  LumaImage out(img.height(), img.width());
  for (std::size_t i = 0; i < out.pixels().size(); ++i) {
    out.pixels()[i] = clamp255(img.pixels()[i] + sigma * stream.next_gaussian());
  }
  return out;
}

LumaImage apply_salt_pepper(const LumaImage& img, double density,
                            std::uint64_t seed) {
  if (density <= 0.0 || density > 0.5) {
    throw std::invalid_argument("salt & pepper density must be in (0, 0.5]");
  }
  RandStream stream(Key::from_seed(seed), "saltpepper");
  LumaImage out(img.height(), img.width());
  for (std::size_t i = 0; i < out.pixels().size(); ++i) {
    if (stream.next_unit() < density) {
      out.pixels()[i] = (stream.next_u32() & 1) ? 255.0 : 0.0;
    } else {
      out.pixels()[i] = img.pixels()[i];
    }
  }
  return out;
}

LumaImage apply_hist_eq(const LumaImage& img) {
  std::array<std::uint64_t, 256> hist{};
  for (double v : img.pixels()) {
    int level = static_cast<int>(std::lround(clamp255(v)));
    ++hist[static_cast<std::size_t>(level)];
  }
  std::array<std::uint64_t, 256> cdf{};
  std::uint64_t running = 0;
  for (int i = 0; i < 256; ++i) {
    running += hist[static_cast<std::size_t>(i)];
    cdf[static_cast<std::size_t>(i)] = running;
  }
  std::uint64_t total = img.pixels().size();
  std::uint64_t cdf_min = 0;
  for (int i = 0; i < 256; ++i) {
    if (hist[static_cast<std::size_t>(i)] > 0) {
      cdf_min = cdf[static_cast<std::size_t>(i)];
      break;
    }
  }
  LumaImage out(img.height(), img.width());
  if (total == cdf_min) {
    out.pixels() = img.pixels();  // single-level image: equalization is identity
    return out;
  }
  std::array<double, 256> lut{};
  double denom = static_cast<double>(total - cdf_min);
  for (int i = 0; i < 256; ++i) {
    double mapped =
        255.0 * (static_cast<double>(cdf[static_cast<std::size_t>(i)]) -
                 static_cast<double>(cdf_min)) /
        denom;
    lut[static_cast<std::size_t>(i)] = clamp255(std::round(mapped));
  }
  for (std::size_t i = 0; i < out.pixels().size(); ++i) {
    int level = static_cast<int>(std::lround(clamp255(img.pixels()[i])));
    out.pixels()[i] = lut[static_cast<std::size_t>(level)];
  }
  return out;
}

LumaImage apply_laplace_sharpen(const LumaImage& img) {
  LumaImage out(img.height(), img.width());
  int h = img.height(), w = img.width();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double center = img.at(r, c);
      double up = img.at(std::max(r - 1, 0), c);
      double down = img.at(std::min(r + 1, h - 1), c);
      double left = img.at(r, std::max(c - 1, 0));
      double right = img.at(r, std::min(c + 1, w - 1));
      out.at(r, c) = clamp255(5.0 * center - up - down - left - right);
    }
  }
  return out;
}

LumaImage apply_rotate(const LumaImage& img, double degrees) {
  if (degrees < -180.0 || degrees > 180.0) {
    throw std::invalid_argument("rotation must be in [-180, 180] degrees");
  }
  double rad = degrees * std::numbers::pi / 180.0;
  double cos_t = std::cos(rad);
  double sin_t = std::sin(rad);
  int h = img.height(), w = img.width();
  double cy = (h - 1) / 2.0;
  double cx = (w - 1) / 2.0;
  LumaImage out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double y = r - cy;
      double x = c - cx;
      double sx = cos_t * x + sin_t * y + cx;
      double sy = -sin_t * x + cos_t * y + cy;
      if (sx < 0.0 || sx > w - 1 || sy < 0.0 || sy > h - 1) {
        out.at(r, c) = 0.0;  // black fill
        continue;
      }
      int x0 = static_cast<int>(std::floor(sx));
      int y0 = static_cast<int>(std::floor(sy));
      int x1 = std::min(x0 + 1, w - 1);
      int y1 = std::min(y0 + 1, h - 1);
      double tx = sx - x0;
      double ty = sy - y0;
      double top = (1.0 - tx) * img.at(y0, x0) + tx * img.at(y0, x1);
      double bottom = (1.0 - tx) * img.at(y1, x0) + tx * img.at(y1, x1);
      out.at(r, c) = (1.0 - ty) * top + ty * bottom;
    }
  }
  return out;
}

LumaImage apply_crop(const LumaImage& img, double fraction) {
  if (fraction <= 0.0 || fraction > 1.0) {
    throw std::invalid_argument("crop fraction must be in (0, 1]");
  }
  double side_scale = std::sqrt(fraction);
  int new_h = static_cast<int>(std::lround(img.height() * side_scale));
  int new_w = static_cast<int>(std::lround(img.width() * side_scale));
  new_h = std::min(new_h, img.height());
  new_w = std::min(new_w, img.width());
  if (new_h < 8 || new_w < 8) {
    throw std::invalid_argument("crop result would be smaller than 8x8");
  }
  int top = (img.height() - new_h) / 2;
  int left = (img.width() - new_w) / 2;
  LumaImage out(new_h, new_w);
  for (int r = 0; r < new_h; ++r) {
    for (int c = 0; c < new_w; ++c) {
      out.at(r, c) = img.at(top + r, left + c);
    }
  }
  return out;
}

LumaImage apply_logo(const LumaImage& img, double fraction) {
  if (fraction <= 0.0 || fraction > 0.5) {
    throw std::invalid_argument("logo area fraction must be in (0, 0.5]");
  }
  double area = fraction * img.height() * img.width();
  int side = static_cast<int>(std::lround(std::sqrt(area)));
  side = std::clamp(side, 8, std::min(img.height(), img.width()));
  LumaImage logo = resize(logo_pattern(), side, side);
  LumaImage out = img;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      out.at(r, c) = logo.at(r, c);
    }
  }
  return out;
}

void require_zero_magnitude(const AttackSpec& spec) {
  if (spec.magnitude != 0.0) {
    throw std::invalid_argument(attack_kind_name(spec.kind) +
                                " takes no magnitude");
  }
}

}  // namespace

LumaImage logo_pattern() {
  // Bordered disc with a bright core and three bars, reminiscent of a badge.
  LumaImage logo(64, 64);
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 64; ++c) {
      double v = 235.0;
      if (r < 4 || r >= 60 || c < 4 || c >= 60) v = 25.0;
      double dy = r - 26.0;
      double dx = c - 32.0;
      double dist = std::sqrt(dx * dx + dy * dy);
      if (dist < 20.0) v = 200.0;
      if (dist >= 14.0 && dist < 20.0) v = 40.0;
      if (r >= 50 && r < 58) {
        if ((c >= 10 && c < 20) || (c >= 27 && c < 37) || (c >= 44 && c < 54)) {
          v = 40.0;
        }
      }
      logo.at(r, c) = v;
    }
  }
  return logo;
}

LumaImage apply(const LumaImage& img, const AttackSpec& spec) {
  switch (spec.kind) {
    case AttackKind::contrast:
      return apply_contrast(img, spec.magnitude);
    case AttackKind::median_filter:
      require_zero_magnitude(spec);
      return apply_median_filter(img);
    case AttackKind::jpeg:
      return apply_jpeg(img, spec.magnitude);
    case AttackKind::gaussian_noise:
      return apply_gaussian_noise(img, spec.magnitude, spec.seed);
    case AttackKind::salt_pepper:
      return apply_salt_pepper(img, spec.magnitude, spec.seed);
    case AttackKind::hist_eq:
      require_zero_magnitude(spec);
      return apply_hist_eq(img);
    case AttackKind::laplace_sharpen:
      require_zero_magnitude(spec);
      return apply_laplace_sharpen(img);
    case AttackKind::rotate:
      return apply_rotate(img, spec.magnitude);
    case AttackKind::crop:
      return apply_crop(img, spec.magnitude);
    case AttackKind::logo:
      return apply_logo(img, spec.magnitude);
    case AttackKind::compose: {
      LumaImage out = img;
      for (const auto& step : spec.steps) out = apply(out, step);
      return out;
    }
  }
  throw std::invalid_argument("unknown attack kind");
}

std::string attack_kind_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::contrast: return "contrast";
    case AttackKind::median_filter: return "median_filter";
    case AttackKind::jpeg: return "jpeg";
    case AttackKind::gaussian_noise: return "gaussian_noise";
    case AttackKind::salt_pepper: return "salt_pepper";
    case AttackKind::hist_eq: return "hist_eq";
    case AttackKind::laplace_sharpen: return "laplace_sharpen";
    case AttackKind::rotate: return "rotate";
    case AttackKind::crop: return "crop";
    case AttackKind::logo: return "logo";
    case AttackKind::compose: return "compose";
  }
  throw std::invalid_argument("unknown attack kind");
}

AttackKind attack_kind_from_name(const std::string& name) {
  static const std::vector<std::pair<std::string, AttackKind>> kMap = {
      {"contrast", AttackKind::contrast},
      {"median_filter", AttackKind::median_filter},
      {"jpeg", AttackKind::jpeg},
      {"gaussian_noise", AttackKind::gaussian_noise},
      {"salt_pepper", AttackKind::salt_pepper},
      {"hist_eq", AttackKind::hist_eq},
      {"laplace_sharpen", AttackKind::laplace_sharpen},
      {"rotate", AttackKind::rotate},
      {"crop", AttackKind::crop},
      {"logo", AttackKind::logo},
      {"compose", AttackKind::compose},
  };
  for (const auto& [key, kind] : kMap) {
    if (key == name) return kind;
  }
  throw std::invalid_argument("unknown attack kind: " + name);
}

namespace {

std::string format_number(double v) {
  // Trim trailing zeros for stable, readable names.
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string AttackSpec::name() const {
  switch (kind) {
    case AttackKind::contrast: {
      int pct = static_cast<int>(std::lround(magnitude * 100.0));
      char buf[32];
      std::snprintf(buf, sizeof(buf), "contrast_%+d", pct);
      return buf;
    }
    case AttackKind::jpeg:
      return "jpeg_" + format_number(magnitude);
    case AttackKind::rotate: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "rotate_%+g", magnitude);
      return buf;
    }
    case AttackKind::crop:
      return "crop_" + format_number(magnitude);
    case AttackKind::logo:
      return "logo_" + format_number(magnitude);
    case AttackKind::compose: {
      std::string out;
      for (const auto& step : steps) {
        if (!out.empty()) out += "+";
        out += step.name();
      }
      return out.empty() ? "compose" : out;
    }
    default:
      return attack_kind_name(kind);
  }
}

nlohmann::ordered_json AttackSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = attack_kind_name(kind);
  if (kind == AttackKind::compose) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& step : steps) arr.push_back(step.to_json());
    j["steps"] = arr;
    return j;
  }
  j["magnitude"] = magnitude;
  if (kind == AttackKind::gaussian_noise || kind == AttackKind::salt_pepper) {
    j["seed"] = seed;
  }
  return j;
}

AttackSpec AttackSpec::from_json(const nlohmann::json& j) {
  AttackSpec spec;
  spec.kind = attack_kind_from_name(j.at("kind").get<std::string>());
  double default_magnitude = 0.0;
  switch (spec.kind) {
    case AttackKind::gaussian_noise: default_magnitude = 5.0; break;
    case AttackKind::salt_pepper: default_magnitude = 0.02; break;
    case AttackKind::logo: default_magnitude = 0.10; break;
    case AttackKind::crop: default_magnitude = 0.5; break;
    default: break;
  }
  spec.magnitude = j.value("magnitude", default_magnitude);
  spec.seed = j.value("seed", std::uint64_t{0});
  if (spec.kind == AttackKind::compose) {
    if (!j.contains("steps") || !j.at("steps").is_array()) {
      throw std::invalid_argument("compose attack requires a steps array");
    }
    for (const auto& step : j.at("steps")) {
      spec.steps.push_back(AttackSpec::from_json(step));
    }
  }
  return spec;
}

std::vector<AttackSpec> table1_suite() {
  std::vector<AttackSpec> suite;
  auto add = [&suite](AttackKind kind, double magnitude, std::uint64_t seed = 0) {
    AttackSpec spec;
    spec.kind = kind;
    spec.magnitude = magnitude;
    spec.seed = seed;
    suite.push_back(spec);
  };
  add(AttackKind::contrast, -0.30);
  add(AttackKind::contrast, -0.20);
  add(AttackKind::contrast, 0.20);
  add(AttackKind::contrast, 0.30);
  add(AttackKind::median_filter, 0.0);
  add(AttackKind::jpeg, 10.0);
  add(AttackKind::jpeg, 20.0);
  add(AttackKind::jpeg, 40.0);
  add(AttackKind::gaussian_noise, 5.0, 1);
  add(AttackKind::salt_pepper, 0.02, 2);
  add(AttackKind::hist_eq, 0.0);
  add(AttackKind::laplace_sharpen, 0.0);
  add(AttackKind::rotate, -5.0);
  add(AttackKind::rotate, -3.0);
  add(AttackKind::rotate, 3.0);
  add(AttackKind::rotate, 5.0);
  return suite;
}

std::vector<AttackSpec> load_attack_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open attack suite: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  if (!doc.is_array()) {
    throw std::runtime_error("attack suite must be a JSON array: " + path);
  }
  std::vector<AttackSpec> suite;
  for (const auto& item : doc) suite.push_back(AttackSpec::from_json(item));
  if (suite.empty()) {
    throw std::runtime_error("attack suite is empty: " + path);
  }
  return suite;
}

}  // namespace phash
