// phash command-line tool: hash images, compare hashes, and run the
// robustness / discrimination / tamper evaluation suites.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phash/harness.hpp"
#include "phash/synth.hpp"
#include "phash/version.hpp"

namespace {

using namespace phash;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CliOptions {
  RunConfig config;
  std::string algorithm = "bdct_pca";
  std::vector<std::string> files;
  std::string compare_a, compare_b;
  std::string out_file;
  int synth_count = 30;
  int synth_size = 512;
  std::uint64_t synth_seed = 0;
};

void add_key_option(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--key", opt.config.key_hex,
                  "Secret key as 64 hex characters")
      ->envname("PHASH_KEY");
}

void add_algorithm_option(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--algorithm", opt.algorithm, "Hash algorithm")
      ->check(CLI::IsMember({"bdct_pca", "svd_dctpca"}));
}

void add_run_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--corpus", opt.config.corpus_dir, "Image corpus directory")
      ->required();
  cmd->add_option("--out", opt.config.output_dir,
                  "Output directory for JSON/CSV reports");
  cmd->add_option("--workers", opt.config.workers, "Worker thread count")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--deterministic", opt.config.deterministic,
                "Omit timestamps and timings for byte-identical reports");
  cmd->add_option("--tau-low", opt.config.tau_low,
                  "same_content / tampered threshold");
  cmd->add_option("--tau-high", opt.config.tau_high,
                  "tampered / distinct threshold");
}

// True when the argument looks like a serialized hash rather than a path.
bool is_hash_string(const std::string& text) {
  return text.rfind("bdct-pca-v", 0) == 0 || text.rfind("svd-dctpca-v", 0) == 0;
}

int run_hash(CliOptions& opt) {
  opt.config.algorithm = algorithm_from_name(opt.algorithm);
  auto lines = hash_files(opt.files, opt.config);
  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!opt.out_file.empty()) {
    file_out.open(opt.out_file);
    if (!file_out) {
      std::cerr << "error: cannot write " << opt.out_file << "\n";
      return kExitRuntime;
    }
    out = &file_out;
  }
  bool any_failed = false;
  for (const auto& line : lines) {
    if (line.error.empty()) {
      (*out) << line.hash << "  " << line.path << "\n";
    } else {
      any_failed = true;
      std::cerr << "error: " << line.error << "\n";
    }
  }
  return any_failed ? kExitRuntime : kExitOk;
}

int run_compare(CliOptions& opt) {
  opt.config.algorithm = algorithm_from_name(opt.algorithm);
  Key key = Key::from_hex(opt.config.key_hex);

  bool a_is_hash = is_hash_string(opt.compare_a);
  bool b_is_hash = is_hash_string(opt.compare_b);

  if (opt.config.algorithm == Algorithm::svd_dctpca ||
      opt.compare_a.rfind("svd-dctpca-v", 0) == 0) {
    auto get = [&](const std::string& arg, bool is_hash) {
      return is_hash ? SpectralHash::from_string(arg, opt.config.spectral)
                     : hash_spectral(load_image(arg), key, opt.config.spectral);
    };
    SpectralHash a = get(opt.compare_a, a_is_hash);
    SpectralHash b = get(opt.compare_b, b_is_hash);
    std::printf("spectral_distance %.6f\n", spectral_distance(a, b));
    return kExitOk;
  }

  auto get = [&](const std::string& arg, bool is_hash) {
    return is_hash ? BitHash::from_string(arg) : hash_image(load_image(arg));
  };
  BitHash a = get(opt.compare_a, a_is_hash);
  BitHash b = get(opt.compare_b, b_is_hash);
  BerValue result = ber(a, b);
  Verdict verdict = classify(result.ber, opt.config.tau_low, opt.config.tau_high);
  std::printf("ber %.6f (%d/%d bits)  verdict %s\n", result.ber,
              result.mismatches, result.total_bits,
              verdict_label_name(verdict.label).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) +
               " - perceptual image hashing toolkit (block-DCT/PCA bit hash "
               "and keyed spectral hash)"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CliOptions opt;

  CLI::App* hash_cmd = app.add_subcommand("hash", "Hash image files");
  hash_cmd->add_option("files", opt.files, "Image files")->required();
  hash_cmd->add_option("--out", opt.out_file, "Write hashes to a file");
  add_key_option(hash_cmd, opt);
  add_algorithm_option(hash_cmd, opt);

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Compare two images or hash strings");
  compare_cmd->add_option("a", opt.compare_a, "Image path or hash string")
      ->required();
  compare_cmd->add_option("b", opt.compare_b, "Image path or hash string")
      ->required();
  add_key_option(compare_cmd, opt);
  add_algorithm_option(compare_cmd, opt);
  compare_cmd->add_option("--tau-low", opt.config.tau_low, "Verdict threshold");
  compare_cmd->add_option("--tau-high", opt.config.tau_high, "Verdict threshold");

  CLI::App* robust_cmd = app.add_subcommand(
      "robustness", "Per-attack BER table over a corpus");
  add_run_options(robust_cmd, opt);
  add_key_option(robust_cmd, opt);
  add_algorithm_option(robust_cmd, opt);
  robust_cmd->add_option("--suite", opt.config.attack_suite,
                         "\"table1\" or a path to an attacks.json suite");
  robust_cmd->add_flag("--debug-identity", opt.config.debug_identity,
                       "Append a contrast-0 identity row");

  CLI::App* disc_cmd = app.add_subcommand(
      "discrimination", "Pairwise BER statistics and histogram over a corpus");
  add_run_options(disc_cmd, opt);
  add_key_option(disc_cmd, opt);
  add_algorithm_option(disc_cmd, opt);

  CLI::App* tamper_cmd = app.add_subcommand(
      "tamper", "Logo-tamper detection with three-way verdicts");
  add_run_options(tamper_cmd, opt);
  add_key_option(tamper_cmd, opt);

  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "Generate a deterministic synthetic test corpus");
  synth_cmd->add_option("--out", opt.config.output_dir, "Output directory")
      ->required();
  synth_cmd->add_option("--count", opt.synth_count, "Number of images")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--size", opt.synth_size, "Square image side")
      ->check(CLI::Range(8, 4096));
  synth_cmd->add_option("--seed", opt.synth_seed, "First image seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(hash_cmd)) return run_hash(opt);
    if (app.got_subcommand(compare_cmd)) return run_compare(opt);
    if (app.got_subcommand(robust_cmd)) {
      opt.config.algorithm = algorithm_from_name(opt.algorithm);
      auto report = cmd_robustness(opt.config);
      for (const auto& row : report.at("attacks")) {
        std::printf("%-20s mean %.4f  min %.4f  max %.4f\n",
                    row.at("name").get<std::string>().c_str(),
                    row.at("mean").get<double>(), row.at("min").get<double>(),
                    row.at("max").get<double>());
      }
      return kExitOk;
    }
    if (app.got_subcommand(disc_cmd)) {
      opt.config.algorithm = algorithm_from_name(opt.algorithm);
      auto report = cmd_discrimination(opt.config);
      std::printf("images %d  pairs %d  mean %.4f  stddev %.4f\n",
                  report.at("image_count").get<int>(),
                  report.at("pair_count").get<int>(),
                  report.at("mean").get<double>(),
                  report.at("stddev").get<double>());
      return kExitOk;
    }
    if (app.got_subcommand(tamper_cmd)) {
      opt.config.algorithm = Algorithm::bdct_pca;
      auto report = cmd_tamper(opt.config);
      for (const auto& row : report.at("tampered_pairs")) {
        std::printf("%-24s ber %.4f  %s\n",
                    row.at("image").get<std::string>().c_str(),
                    row.at("ber").get<double>(),
                    row.at("label").get<std::string>().c_str());
      }
      return kExitOk;
    }
    if (app.got_subcommand(synth_cmd)) {
      write_synth_corpus(opt.config.output_dir, opt.synth_count, opt.synth_size,
                         opt.synth_seed);
      std::printf("wrote %d images to %s\n", opt.synth_count,
                  opt.config.output_dir.c_str());
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
