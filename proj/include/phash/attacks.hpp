#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "phash/image.hpp"

namespace phash {

enum class AttackKind {
  contrast,
  median_filter,
  jpeg,
  gaussian_noise,
  salt_pepper,
  hist_eq,
  laplace_sharpen,
  rotate,
  crop,
  logo,
  compose,
};

std::string attack_kind_name(AttackKind kind);
AttackKind attack_kind_from_name(const std::string& name);

/// One content-preserving operation (or the logo tamper). `magnitude` is the
/// per-kind parameter:
///   contrast        gain offset in [-0.5, 0.5]; out = 128 + (1+a)(in - 128)
///   median_filter   unused (0)
///   jpeg            degradation x in [0, 99]; quality factor = 100 - x
///   gaussian_noise  sigma in gray levels, (0, 64]; default 5
///   salt_pepper     density in (0, 0.5]; default 0.02
///   hist_eq         unused (0)
///   laplace_sharpen unused (0)
///   rotate          degrees in [-180, 180], about center, same frame
///   crop            area fraction in (0, 1]; centered window
///   logo            area fraction in (0, 0.5]; default 0.10, upper-left
///   compose         unused; `steps` applied in order
struct AttackSpec {
  AttackKind kind = AttackKind::contrast;
  double magnitude = 0.0;
  std::uint64_t seed = 0;
  std::vector<AttackSpec> steps;

  std::string name() const;
  nlohmann::ordered_json to_json() const;
  static AttackSpec from_json(const nlohmann::json& j);
};

/// Applies the operation; throws std::invalid_argument on out-of-range
/// magnitudes. Noise attacks are reproducible given the seed.
LumaImage apply(const LumaImage& img, const AttackSpec& spec);

/// The 16 reference operations of the "table1" suite: contrast -30/-20/+20/+30,
/// median filter, JPEG 10/20/40, Gaussian noise, salt & pepper, histogram
/// equalisation, Laplace sharpen, rotation -5/-3/+3/+5.
std::vector<AttackSpec> table1_suite();

/// Loads a JSON array of attack specs from a file.
std::vector<AttackSpec> load_attack_suite(const std::string& path);

/// The deterministic 64x64 logo pattern used by the logo tamper.
LumaImage logo_pattern();

}  // namespace phash
