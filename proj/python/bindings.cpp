// Python bindings for the core hashing, attack and metric operations.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include "phash/attacks.hpp"
#include "phash/blockhash.hpp"
#include "phash/harness.hpp"
#include "phash/image.hpp"
#include "phash/linalg.hpp"
#include "phash/metrics.hpp"
#include "phash/prng.hpp"
#include "phash/spectral.hpp"
#include "phash/synth.hpp"
#include "phash/version.hpp"

namespace py = pybind11;
using namespace phash;

namespace {

LumaImage image_from_array(const py::array_t<double, py::array::c_style |
                                                         py::array::forcecast>& arr) {
  if (arr.ndim() != 2) {
    throw std::invalid_argument("image array must be 2-D (height x width)");
  }
  int h = static_cast<int>(arr.shape(0));
  int w = static_cast<int>(arr.shape(1));
  std::vector<double> pixels(static_cast<std::size_t>(h) * w);
  std::memcpy(pixels.data(), arr.data(), pixels.size() * sizeof(double));
  return LumaImage(h, w, std::move(pixels));
}

py::array_t<double> array_from_image(const LumaImage& img) {
  py::array_t<double> arr({img.height(), img.width()});
  std::memcpy(arr.mutable_data(), img.pixels().data(),
              img.pixels().size() * sizeof(double));
  return arr;
}

py::array_t<double> array_from_matrix(const Matrix& m) {
  py::array_t<double> arr({m.rows, m.cols});
  std::memcpy(arr.mutable_data(), m.data.data(), m.data.size() * sizeof(double));
  return arr;
}

Matrix matrix_from_array(const py::array_t<double, py::array::c_style |
                                                       py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("matrix must be 2-D");
  int r = static_cast<int>(arr.shape(0));
  int c = static_cast<int>(arr.shape(1));
  std::vector<double> data(static_cast<std::size_t>(r) * c);
  std::memcpy(data.data(), arr.data(), data.size() * sizeof(double));
  return Matrix(r, c, std::move(data));
}

py::array_t<double> vector_to_array(const std::vector<double>& v) {
  py::array_t<double> arr(static_cast<py::ssize_t>(v.size()));
  std::memcpy(arr.mutable_data(), v.data(), v.size() * sizeof(double));
  return arr;
}

AttackSpec spec_from_args(const std::string& kind, double magnitude,
                          std::uint64_t seed) {
  AttackSpec spec;
  spec.kind = attack_kind_from_name(kind);
  spec.magnitude = magnitude;
  spec.seed = seed;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_phash, m) {
  m.doc() = "Perceptual image hashing toolkit: block-DCT/PCA bit hash, keyed "
            "spectral hash, attack suite and evaluation metrics";
  m.attr("__version__") = kToolVersion;

  py::class_<BitHash>(m, "BitHash")
      .def_static("from_string", &BitHash::from_string, py::arg("text"))
      .def("to_string", &BitHash::to_string)
      .def_property_readonly("algorithm_tag", &BitHash::algorithm_tag)
      .def_property_readonly("version", &BitHash::version)
      .def("popcount", &BitHash::popcount)
      .def("bits",
           [](const BitHash& h) {
             py::array_t<std::uint8_t> arr(BitHash::kBits);
             std::memcpy(arr.mutable_data(), h.bits().data(), BitHash::kBits);
             return arr;
           })
      .def("__eq__", [](const BitHash& a, const BitHash& b) { return a == b; })
      .def("__repr__", [](const BitHash& h) {
        return "<BitHash " + h.to_string().substr(0, 28) + "...>";
      });

  py::class_<BerValue>(m, "BerValue")
      .def_readonly("mismatches", &BerValue::mismatches)
      .def_readonly("total_bits", &BerValue::total_bits)
      .def_readonly("ber", &BerValue::ber)
      .def("__float__", [](const BerValue& v) { return v.ber; })
      .def("__repr__", [](const BerValue& v) {
        return "<BerValue " + std::to_string(v.ber) + " (" +
               std::to_string(v.mismatches) + "/" +
               std::to_string(v.total_bits) + ")>";
      });

  py::class_<Verdict>(m, "Verdict")
      .def_property_readonly("label",
                             [](const Verdict& v) {
                               return verdict_label_name(v.label);
                             })
      .def_readonly("ber", &Verdict::ber)
      .def_readonly("tau_low", &Verdict::tau_low)
      .def_readonly("tau_high", &Verdict::tau_high)
      .def("__repr__", [](const Verdict& v) {
        return "<Verdict " + verdict_label_name(v.label) + " at ber " +
               std::to_string(v.ber) + ">";
      });

  py::class_<DistributionStats>(m, "DistributionStats")
      .def_readonly("count", &DistributionStats::count)
      .def_readonly("mean", &DistributionStats::mean)
      .def_readonly("variance", &DistributionStats::variance)
      .def("stddev", &DistributionStats::stddev)
      .def_property_readonly("histogram", [](const DistributionStats& s) {
        return std::vector<int>(s.histogram.begin(), s.histogram.end());
      });

  py::enum_<Stage2Mode>(m, "Stage2Mode")
      .value("whole_image", Stage2Mode::whole_image)
      .value("rectangles", Stage2Mode::rectangles);

  py::class_<SpectralParams>(m, "SpectralParams")
      .def(py::init<>())
      .def_readwrite("p", &SpectralParams::p)
      .def_readwrite("m", &SpectralParams::m)
      .def_readwrite("r", &SpectralParams::r)
      .def_readwrite("d", &SpectralParams::d)
      .def_readwrite("f_min", &SpectralParams::f_min)
      .def_readwrite("f_max", &SpectralParams::f_max)
      .def_readwrite("smooth", &SpectralParams::smooth)
      .def_readwrite("stage2_mode", &SpectralParams::stage2_mode)
      .def("band_length", &SpectralParams::band_length)
      .def("validate", &SpectralParams::validate);

  py::class_<SpectralHash>(m, "SpectralHash")
      .def_static("from_string", &SpectralHash::from_string, py::arg("text"),
                  py::arg("params") = SpectralParams{})
      .def("to_string", &SpectralHash::to_string)
      .def_property_readonly(
          "u1", [](const SpectralHash& h) { return vector_to_array(h.u1); })
      .def_property_readonly(
          "v1", [](const SpectralHash& h) { return vector_to_array(h.v1); })
      .def_readonly("algorithm_tag", &SpectralHash::algorithm_tag)
      .def("__repr__", [](const SpectralHash& h) {
        return "<SpectralHash u1[" + std::to_string(h.u1.size()) + "] v1[" +
               std::to_string(h.v1.size()) + "]>";
      });

  // Image I/O and preprocessing.
  m.def("load_image",
        [](const std::string& path) { return array_from_image(load_image(path)); },
        py::arg("path"), "Decode a PNG/JPEG/BMP file to a luminance array");
  m.def("decode_bytes",
        [](const py::bytes& data) {
          std::string buf = data;
          return array_from_image(decode_image(
              reinterpret_cast<const std::uint8_t*>(buf.data()), buf.size()));
        },
        py::arg("data"), "Decode encoded image bytes to a luminance array");
  m.def("standardize",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
          StandardImage s = standardize(image_from_array(arr));
          py::array_t<double> out({StandardImage::kSize, StandardImage::kSize});
          std::memcpy(out.mutable_data(), s.pixels.data(),
                      s.pixels.size() * sizeof(double));
          return out;
        },
        py::arg("image"), "Warp a luminance array to the 64x64 standard frame");
  m.def("resize",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
           int height, int width) {
          return array_from_image(resize(image_from_array(arr), height, width));
        },
        py::arg("image"), py::arg("height"), py::arg("width"));
  m.def("write_png",
        [](const std::string& path,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
          write_png_gray(path, image_from_array(arr));
        },
        py::arg("path"), py::arg("image"), "Write a grayscale PNG");

  // Hashing.
  m.def("hash_image",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
          return hash_image(image_from_array(arr));
        },
        py::arg("image"), "640-bit block-DCT/PCA perceptual hash");
  m.def("hash_spectral",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
           const std::string& key_hex, const SpectralParams& params) {
          return hash_spectral(image_from_array(arr), Key::from_hex(key_hex),
                               params);
        },
        py::arg("image"), py::arg("key_hex"),
        py::arg("params") = SpectralParams{},
        "Keyed two-stage spectral hash (DCT band features + SVD)");
  m.def("spectral_distance", &spectral_distance, py::arg("a"), py::arg("b"));
  m.def("key_from_seed",
        [](std::uint64_t seed) { return Key::from_seed(seed).to_hex(); },
        py::arg("seed"), "Expand a 64-bit seed into a key hex string");

  // Metrics.
  m.def("ber", &ber, py::arg("a"), py::arg("b"),
        "Bit error rate between two bit hashes");
  m.def("classify", &classify, py::arg("ber"),
        py::arg("tau_low") = kDefaultTauLow,
        py::arg("tau_high") = kDefaultTauHigh,
        "Three-way same_content / tampered / distinct verdict");
  m.def("pairwise_stats", &pairwise_stats, py::arg("hashes"),
        "All-pairs BER statistics");

  // Attacks.
  m.def("apply_attack",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
           const std::string& kind, double magnitude, std::uint64_t seed) {
          return array_from_image(
              apply(image_from_array(arr), spec_from_args(kind, magnitude, seed)));
        },
        py::arg("image"), py::arg("kind"), py::arg("magnitude") = 0.0,
        py::arg("seed") = 0,
        "Apply a content-preserving operation (or the logo tamper)");
  m.def("table1_suite", []() {
    std::vector<py::dict> rows;
    for (const auto& spec : table1_suite()) {
      py::dict row;
      row["name"] = spec.name();
      row["kind"] = attack_kind_name(spec.kind);
      row["magnitude"] = spec.magnitude;
      row["seed"] = spec.seed;
      rows.push_back(row);
    }
    return rows;
  });

  // Numerical kernels.
  m.def("dct2",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
          return array_from_matrix(dct2(matrix_from_array(arr)));
        },
        py::arg("block"), "Orthonormal 2-D DCT-II");
  m.def("idct2",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
          return array_from_matrix(idct2(matrix_from_array(arr)));
        },
        py::arg("coeffs"));
  m.def("svd_truncated",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
           int k) {
          SvdResult svd = svd_truncated(matrix_from_array(arr), k);
          return py::make_tuple(vector_to_array(svd.singular_values),
                                array_from_matrix(svd.left_vectors),
                                array_from_matrix(svd.right_vectors));
        },
        py::arg("matrix"), py::arg("k"),
        "Top-k singular triplets: (sigma, U, V)");
  m.def("pca_project",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
           int k) {
          PcaResult pca = pca_project(matrix_from_array(arr), k);
          return py::make_tuple(array_from_matrix(pca.components),
                                array_from_matrix(pca.projected),
                                vector_to_array(pca.explained_variance));
        },
        py::arg("data"), py::arg("k"),
        "PCA of samples-by-features data: (components, projected, variance)");
  m.def("median_of", &median_of, py::arg("values"));

  // Synthetic corpus support.
  m.def("synth_image",
        [](std::uint64_t index, int height, int width) {
          return array_from_image(synth_image(index, height, width));
        },
        py::arg("index"), py::arg("height") = 512, py::arg("width") = 512,
        "Deterministic procedural test image");
}
