#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "phash/blockhash.hpp"
#include "phash/metrics.hpp"
#include "phash/synth.hpp"
#include "test_helpers.hpp"

using namespace phash;
using phash::testing::random_matrix;

namespace {

constexpr int kZigzag[8][2] = {{0, 0}, {0, 1}, {1, 0}, {2, 0},
                               {1, 1}, {0, 2}, {0, 3}, {1, 2}};

StandardImage constant_standard(double value) {
  StandardImage img;
  img.pixels.assign(64 * 64, value);
  return img;
}

}  // namespace

TEST_CASE("block_histogram bins by intensity octave") {
  Matrix block(8, 8);
  SUBCASE("all zero") {
    auto bins = block_histogram(block);
    CHECK(bins[0] == 64);
    for (int i = 1; i < 8; ++i) CHECK(bins[static_cast<std::size_t>(i)] == 0);
  }
  SUBCASE("all 255") {
    for (double& v : block.data) v = 255.0;
    auto bins = block_histogram(block);
    CHECK(bins[7] == 64);
    for (int i = 0; i < 7; ++i) CHECK(bins[static_cast<std::size_t>(i)] == 0);
  }
  SUBCASE("each octave value repeated eight times") {
    for (int i = 0; i < 64; ++i) block.data[static_cast<std::size_t>(i)] = 32.0 * (i % 8);
    auto bins = block_histogram(block);
    for (int i = 0; i < 8; ++i) CHECK(bins[static_cast<std::size_t>(i)] == 8);
  }
  SUBCASE("bins always sum to 64") {
    RandStream rs(Key::from_seed(31), "hist");
    for (int trial = 0; trial < 20; ++trial) {
      Matrix b = random_matrix(rs, 8, 8, 0.0, 255.0);
      auto bins = block_histogram(b);
      int sum = 0;
      for (int v : bins) sum += v;
      CHECK(sum == 64);
    }
  }
}

TEST_CASE("block_dct_features selects DC plus 7 zigzag AC coefficients") {
  SUBCASE("constant block concentrates in DC") {
    Matrix block(8, 8);
    for (double& v : block.data) v = 100.0;
    auto f = block_dct_features(block);
    CHECK(f[0] == doctest::Approx(800.0).epsilon(1e-12));
    for (int i = 1; i < 8; ++i) {
      CHECK(std::abs(f[static_cast<std::size_t>(i)]) < 1e-12);
    }
  }
  SUBCASE("transposed block swaps transposed zigzag partners") {
    RandStream rs(Key::from_seed(32), "dctf");
    Matrix block = random_matrix(rs, 8, 8, 0.0, 255.0);
    auto f = block_dct_features(block);
    auto ft = block_dct_features(block.transposed());
    CHECK(ft[0] == doctest::Approx(f[0]).epsilon(1e-12));  // DC
    CHECK(ft[1] == doctest::Approx(f[2]).epsilon(1e-12));  // (0,1) <-> (1,0)
    CHECK(ft[2] == doctest::Approx(f[1]).epsilon(1e-12));
    CHECK(ft[3] == doctest::Approx(f[5]).epsilon(1e-12));  // (2,0) <-> (0,2)
    CHECK(ft[5] == doctest::Approx(f[3]).epsilon(1e-12));
    CHECK(ft[4] == doctest::Approx(f[4]).epsilon(1e-12));  // (1,1)
  }
  SUBCASE("matches the naive oracle in zigzag order") {
    RandStream rs(Key::from_seed(33), "dctf");
    Matrix block = random_matrix(rs, 8, 8, 0.0, 255.0);
    auto f = block_dct_features(block);
    for (int i = 0; i < 8; ++i) {
      double expected =
          oracles::naive_dct2_coeff(block, kZigzag[i][0], kZigzag[i][1]);
      CHECK(f[static_cast<std::size_t>(i)] ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("extract_features lays out 64 blocks by raster order") {
  SUBCASE("constant image rows") {
    FeatureMatrix fm = extract_features(constant_standard(100.0));
    REQUIRE(fm.values.rows == 64);
    REQUIRE(fm.values.cols == 16);
    for (int b = 0; b < 64; ++b) {
      for (int i = 0; i < 8; ++i) {
        CHECK(fm.values.at(b, i) == (i == 3 ? 64.0 : 0.0));  // floor(100/32)=3
      }
      CHECK(fm.values.at(b, 8) == doctest::Approx(800.0).epsilon(1e-12));
      for (int i = 9; i < 16; ++i) {
        CHECK(std::abs(fm.values.at(b, i)) < 1e-12);
      }
    }
  }
  SUBCASE("one white block differs from the black baseline") {
    StandardImage img = constant_standard(0.0);
    for (int r = 16; r < 24; ++r) {
      for (int c = 40; c < 48; ++c) {
        img.pixels[static_cast<std::size_t>(r) * 64 + c] = 255.0;
      }
    }
    FeatureMatrix fm = extract_features(img);
    int changed_row = 2 * 8 + 5;  // block row 2, block col 5
    int diff_count = 0;
    for (int b = 0; b < 64; ++b) {
      bool differs = false;
      for (int i = 0; i < 16; ++i) {
        if (std::abs(fm.values.at(b, i) - fm.values.at(0, i)) > 1e-9) {
          differs = true;
          break;
        }
      }
      if (differs) {
        ++diff_count;
        CHECK(b == changed_row);
      }
    }
    CHECK(diff_count == 1);
  }
  SUBCASE("rows equal an independent per-block recomputation") {
    LumaImage img = synth_image(41, 64, 64);
    StandardImage std_img = standardize(img);
    FeatureMatrix fm = extract_features(std_img);
    for (int by = 0; by < 8; ++by) {
      for (int bx = 0; bx < 8; ++bx) {
        Matrix block(8, 8);
        for (int r = 0; r < 8; ++r) {
          for (int c = 0; c < 8; ++c) {
            block.at(r, c) = std_img.at(by * 8 + r, bx * 8 + c);
          }
        }
        auto hist = block_histogram(block);
        auto dct = block_dct_features(block);
        int row = by * 8 + bx;
        for (int i = 0; i < 8; ++i) {
          CHECK(fm.values.at(row, i) == hist[static_cast<std::size_t>(i)]);
          CHECK(fm.values.at(row, 8 + i) ==
                doctest::Approx(dct[static_cast<std::size_t>(i)]).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("inter_quantize compresses to a 10x64 inter-feature matrix") {
  SUBCASE("rank-1 feature matrix concentrates variance in row 0") {
    RandStream rs(Key::from_seed(34), "iq");
    FeatureMatrix fm;
    fm.values = Matrix(64, 16);
    std::vector<double> base;
    for (int r = 0; r < 64; ++r) base.push_back(rs.next_unit() * 50.0);
    for (int r = 0; r < 64; ++r) {
      for (int c = 0; c < 16; ++c) {
        fm.values.at(r, c) = base[static_cast<std::size_t>(r)];
      }
    }
    InterFeature inter = inter_quantize(fm);
    REQUIRE(inter.values.rows == 10);
    REQUIRE(inter.values.cols == 64);
    double row0 = 0.0;
    for (int c = 0; c < 64; ++c) row0 += inter.values.at(0, c) * inter.values.at(0, c);
    CHECK(row0 > 1.0);
    for (int r = 1; r < 10; ++r) {
      for (int c = 0; c < 64; ++c) {
        CHECK(std::abs(inter.values.at(r, c)) < 1e-8);
      }
    }
  }
  SUBCASE("constant image gives an all-zero inter-feature matrix") {
    InterFeature inter = inter_quantize(extract_features(constant_standard(42.0)));
    for (double v : inter.values.data) CHECK(v == 0.0);
  }
  SUBCASE("total projected variance matches the top-10 oracle eigenvalues") {
    LumaImage img = synth_image(42, 64, 64);
    FeatureMatrix fm = extract_features(standardize(img));
    InterFeature inter = inter_quantize(fm);

    // Oracle: rescale histogram columns to fractions, center, covariance,
    // Jacobi, top-10 eigenvalue sum.
    Matrix z(64, 16);
    for (int c = 0; c < 16; ++c) {
      double scale = c < 8 ? 1.0 / 64.0 : 1.0;
      double mean = 0.0;
      for (int r = 0; r < 64; ++r) mean += fm.values.at(r, c) * scale;
      mean /= 64;
      for (int r = 0; r < 64; ++r) {
        z.at(r, c) = fm.values.at(r, c) * scale - mean;
      }
    }
    Matrix cov = matmul(z.transposed(), z);
    for (double& v : cov.data) v /= 63;
    auto oracle = oracles::jacobi_eigen(cov);
    double oracle_sum = 0.0;
    for (int j = 0; j < 10; ++j) oracle_sum += oracle[static_cast<std::size_t>(j)].first;

    double row_var_sum = 0.0;
    for (int r = 0; r < 10; ++r) {
      double mean = 0.0;
      for (int c = 0; c < 64; ++c) mean += inter.values.at(r, c);
      mean /= 64;
      double var = 0.0;
      for (int c = 0; c < 64; ++c) {
        double d = inter.values.at(r, c) - mean;
        var += d * d;
      }
      row_var_sum += var / 63;
    }
    CHECK(row_var_sum == doctest::Approx(oracle_sum).epsilon(1e-8));
  }
}

TEST_CASE("binarize thresholds each column at its median") {
  SUBCASE("ascending column gives 0000011111") {
    InterFeature inter;
    inter.values = Matrix(10, 64);
    for (int r = 0; r < 10; ++r) {
      inter.values.at(r, 0) = r + 1;  // 1..10
      for (int c = 1; c < 64; ++c) inter.values.at(r, c) = (r * 37 + c * 11) % 19;
    }
    BitHash hash = binarize(inter);
    for (int r = 0; r < 5; ++r) CHECK(hash.bit(r) == false);
    for (int r = 5; r < 10; ++r) CHECK(hash.bit(r) == true);
  }
  SUBCASE("all-zero column is all ones (>= tie rule)") {
    InterFeature inter;
    inter.values = Matrix(10, 64);
    BitHash hash = binarize(inter);
    CHECK(hash.popcount() == 640);
  }
  SUBCASE("distinct-valued columns contribute exactly 5 ones") {
    RandStream rs(Key::from_seed(35), "bin");
    for (int trial = 0; trial < 100; ++trial) {
      InterFeature inter;
      inter.values = Matrix(10, 64);
      for (int c = 0; c < 64; ++c) {
        std::set<double> seen;
        for (int r = 0; r < 10; ++r) {
          double v;
          do {
            v = rs.next_unit() * 100.0 - 50.0;
          } while (!seen.insert(v).second);
          inter.values.at(r, c) = v;
        }
      }
      BitHash hash = binarize(inter);
      for (int c = 0; c < 64; ++c) {
        int ones = 0;
        for (int r = 0; r < 10; ++r) ones += hash.bit(c * 10 + r);
        CHECK(ones == 5);
      }
    }
  }
}

TEST_CASE("hash_image end-to-end behavior") {
  SUBCASE("deterministic, 640 bits, tagged") {
    LumaImage img = synth_image(50, 200, 300);
    BitHash a = hash_image(img);
    BitHash b = hash_image(img);
    CHECK(a == b);
    CHECK(a.bits().size() == 640);
    CHECK(a.algorithm_tag() == "bdct-pca");
    CHECK(a.version() == 1);
  }
  SUBCASE("hash length is resolution independent") {
    for (auto [h, w] : {std::pair{64, 64}, {256, 128}, {512, 512}, {777, 333}}) {
      BitHash hash = hash_image(synth_image(51, h, w));
      CHECK(hash.bits().size() == 640);
    }
  }
  SUBCASE("downscaled image hashes nearly identically") {
    LumaImage big = synth_image(52, 512, 512);
    LumaImage small = resize(big, 256, 256);
    double b = ber(hash_image(big), hash_image(small)).ber;
    CHECK(b <= 0.05);
  }
  SUBCASE("distinct images land near BER 0.5") {
    double b = ber(hash_image(synth_image(53, 512, 512)),
                   hash_image(synth_image(54, 512, 512)))
                   .ber;
    CHECK(b >= 0.35);
    CHECK(b <= 0.65);
  }
  SUBCASE("generic images carry exactly 320 ones; ties only add") {
    for (std::uint64_t idx : {60ull, 61ull, 62ull}) {
      BitHash hash = hash_image(synth_image(idx, 128, 128));
      CHECK(hash.popcount() == 320);
    }
    LumaImage flat(64, 64);
    for (double& v : flat.pixels()) v = 9.0;
    BitHash flat_hash = hash_image(flat);
    CHECK(flat_hash.popcount() == 640);  // every column ties
    CHECK(flat_hash.popcount() >= 320);
  }
}

TEST_CASE("BitHash serialization round trip") {
  LumaImage img = synth_image(55, 100, 100);
  BitHash hash = hash_image(img);
  std::string text = hash.to_string();
  CHECK(text.substr(0, 12) == "bdct-pca-v1:");
  CHECK(text.size() == 12 + 160);
  for (char c : text.substr(12)) {
    bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    CHECK(hex);
  }
  BitHash back = BitHash::from_string(text);
  CHECK(back == hash);
  CHECK_THROWS_AS(BitHash::from_string("bdct-pca-v1:abcd"), std::invalid_argument);
  CHECK_THROWS_AS(BitHash::from_string("nonsense"), std::invalid_argument);
}
