// Copyright 2026 The Bosonflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bosonflow/errors.hpp"
#include "bosonflow/experiments.hpp"
#include "bosonflow/kernel.hpp"
#include "bosonflow/layer.hpp"
#include "bosonflow/serialize.hpp"

namespace bf = bosonflow;
using Json = nlohmann::ordered_json;

namespace {

// Exit codes: 0 success, 1 verification failure, 2 usage or config error,
// 3 runtime error. Results go to standard output (or --out), diagnostics to
// standard error.
constexpr int kOk = 0;
constexpr int kVerificationFailure = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bf::ParseError("cannot open config file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_result(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw bf::Error("cannot open output file: " + out_path);
  out << text;
}

/// Quotes a CSV field; labels such as "[2,0]" contain commas.
std::string csv_quote(const std::string& field) {
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw bf::ParseError(e.what());
  }
}

struct CommonFlags {
  std::uint64_t seed = 42;
  int threads = default_threads();
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags* flags, bool with_format = true) {
  cmd->add_option("--seed", flags->seed, "Random seed");
  cmd->add_option("--threads", flags->threads, "Worker threads for batched rows")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", flags->out, "Write the primary result to this file");
  if (with_format) {
    cmd->add_option("--format", flags->format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
  }
}

int run_simulate(const std::string& config_path, const CommonFlags& flags) {
  const std::string text = read_file(config_path);
  bf::layer::LayerSpec spec = bf::serialize::layer_spec_from_json(text);
  bf::layer::PhotonicLayer layer(std::move(spec));

  const Json config = parse_json(text);
  bf::RMatrix x;
  if (config.contains("experiment") && config.at("experiment").contains("inputs")) {
    const auto rows = config.at("experiment")
                          .at("inputs")
                          .get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw bf::ParseError("experiment.inputs must be nonempty");
    x = bf::RMatrix(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size()) {
        throw bf::ParseError("experiment.inputs rows must have equal length");
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      }
    }
  } else if (std::holds_alternative<bf::layer::AmplitudeInput>(layer.spec().input)) {
    x = bf::RMatrix::Ones(1, 1);
  } else {
    x = bf::RMatrix::Zero(1, layer.spec().circuit.input_feature_count());
  }

  const auto start = std::chrono::steady_clock::now();
  const bf::RMatrix outputs = x.rows() > 0 ? layer.forward(x, false, flags.threads)
                                           : bf::RMatrix(0, layer.output_dim());
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "simulated " << x.rows() << " row(s) in " << seconds << " s\n";

  const auto& labels = layer.output_labels();
  if (flags.format == "csv") {
    std::string csv;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i > 0) csv += ',';
      csv += csv_quote(labels[i]);
    }
    csv += '\n';
    for (Eigen::Index r = 0; r < outputs.rows(); ++r) {
      for (Eigen::Index c = 0; c < outputs.cols(); ++c) {
        if (c > 0) csv += ',';
        csv += format_double(outputs(r, c));
      }
      csv += '\n';
    }
    write_result(csv, flags.out);
  } else {
    Json j;
    j["labels"] = labels;
    Json out_rows = Json::array();
    for (Eigen::Index r = 0; r < outputs.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < outputs.cols(); ++c) row.push_back(outputs(r, c));
      out_rows.push_back(std::move(row));
    }
    j["outputs"] = std::move(out_rows);
    write_result(j.dump(2) + "\n", flags.out);
  }
  return kOk;
}

int run_verify(int max_m, int max_n, int trials, double perturb,
               const CommonFlags& flags) {
  const auto report =
      bf::experiments::verify_slos_vs_oracle(max_m, max_n, trials, flags.seed, perturb);
  Json j;
  j["max_m"] = max_m;
  j["max_n"] = max_n;
  j["trials_per_case"] = trials;
  j["cases"] = report.cases;
  j["trials"] = report.trials;
  j["max_deviation"] = report.max_deviation;
  j["tolerance"] = report.tolerance;
  j["passed"] = report.passed;
  write_result(j.dump(2) + "\n", flags.out);
  if (!report.passed) {
    std::cerr << "verification failed: max deviation " << report.max_deviation
              << " exceeds " << report.tolerance << "\n";
    return kVerificationFailure;
  }
  return kOk;
}

bf::experiments::FourierTarget target_from_file(const std::string& path) {
  const Json j = parse_json(read_file(path));
  if (!j.is_object() || !j.contains("constant") || !j.contains("cos") ||
      !j.contains("sin")) {
    throw bf::ParseError("fourier target: expected {constant, cos, sin}");
  }
  bf::experiments::FourierTarget t;
  try {
    t.constant = j.at("constant").get<double>();
    t.cos_coeffs = j.at("cos").get<std::vector<double>>();
    t.sin_coeffs = j.at("sin").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw bf::ParseError(std::string("fourier target: ") + e.what());
  }
  if (t.cos_coeffs.size() != t.sin_coeffs.size()) {
    throw bf::ParseError("fourier target: cos and sin need equal lengths");
  }
  return t;
}

int run_fit_fourier(int photons, int degree, const std::string& target_path, int steps,
                    double lr, const CommonFlags& flags) {
  const bf::experiments::FourierTarget target =
      target_path.empty() ? bf::experiments::random_fourier_target(degree, flags.seed)
                          : target_from_file(target_path);
  const auto result =
      bf::experiments::fit_fourier(photons, target, steps, lr, flags.seed, flags.threads);
  std::cerr << "final mse: " << result.mse << "\n";

  if (flags.format == "csv") {
    std::string csv = "x,target,fit\n";
    for (Eigen::Index i = 0; i < result.grid.size(); ++i) {
      csv += format_double(result.grid(i));
      csv += ',';
      csv += format_double(result.target(i));
      csv += ',';
      csv += format_double(result.fit(i));
      csv += '\n';
    }
    write_result(csv, flags.out);
  } else {
    Json j;
    j["photons"] = photons;
    j["steps"] = steps;
    j["lr"] = lr;
    j["seed"] = flags.seed;
    j["target_constant"] = target.constant;
    j["target_cos"] = target.cos_coeffs;
    j["target_sin"] = target.sin_coeffs;
    j["mse"] = result.mse;
    j["grid"] = std::vector<double>(result.grid.data(),
                                    result.grid.data() + result.grid.size());
    j["target_values"] = std::vector<double>(
        result.target.data(), result.target.data() + result.target.size());
    j["fit"] =
        std::vector<double>(result.fit.data(), result.fit.data() + result.fit.size());
    write_result(j.dump(2) + "\n", flags.out);
  }
  return kOk;
}

int run_classify_moons(int samples, double noise, int epochs, double lr, int grid_size,
                       const CommonFlags& flags) {
  const auto result = bf::experiments::classify_moons(samples, noise, epochs, lr,
                                                      flags.seed, flags.threads,
                                                      grid_size);
  std::cerr << "train accuracy " << result.train_accuracy << ", test accuracy "
            << result.test_accuracy << "\n";

  if (flags.format == "csv") {
    std::string csv = "x,y,p_class1\n";
    for (int i = 0; i < result.grid_size; ++i) {
      const double fy = static_cast<double>(i) / (result.grid_size - 1);
      const double y = result.data.lo[1] + fy * (result.data.hi[1] - result.data.lo[1]);
      for (int j = 0; j < result.grid_size; ++j) {
        const double fx = static_cast<double>(j) / (result.grid_size - 1);
        const double x =
            result.data.lo[0] + fx * (result.data.hi[0] - result.data.lo[0]);
        csv += format_double(x);
        csv += ',';
        csv += format_double(y);
        csv += ',';
        csv += format_double(result.grid(i, j));
        csv += '\n';
      }
    }
    write_result(csv, flags.out);
  } else {
    Json j;
    j["samples"] = samples;
    j["noise"] = noise;
    j["epochs"] = epochs;
    j["lr"] = lr;
    j["seed"] = flags.seed;
    j["train_size"] = result.train_size;
    j["test_size"] = result.test_size;
    j["train_accuracy"] = result.train_accuracy;
    j["test_accuracy"] = result.test_accuracy;
    j["final_loss"] = result.losses.empty() ? 0.0 : result.losses.back();
    j["losses"] = result.losses;
    j["x_range"] = Json::array({result.data.lo[0], result.data.hi[0]});
    j["y_range"] = Json::array({result.data.lo[1], result.data.hi[1]});
    j["grid_size"] = result.grid_size;
    Json grid = Json::array();
    for (int i = 0; i < result.grid_size; ++i) {
      Json row = Json::array();
      for (int k = 0; k < result.grid_size; ++k) row.push_back(result.grid(i, k));
      grid.push_back(std::move(row));
    }
    j["grid"] = std::move(grid);
    write_result(j.dump(2) + "\n", flags.out);
  }
  return kOk;
}

int run_bench(int modes, int photons, int batch, int repeats, const CommonFlags& flags) {
  const auto report = bf::experiments::bench(modes, photons, batch, repeats, flags.seed);
  Json j;
  j["modes"] = report.modes;
  j["photons"] = report.photons;
  j["basis_size"] = report.basis_size;
  j["edges"] = report.edges;
  j["build_seconds"] = report.build_seconds;
  j["build_count"] = report.build_count;
  j["forwards"] = report.forwards;
  j["first_forward_seconds"] = report.first_forward_seconds;
  j["mean_forward_seconds"] = report.mean_forward_seconds;
  j["min_forward_seconds"] = report.min_forward_seconds;
  j["forward_seconds_variance"] = report.forward_seconds_variance;
  write_result(j.dump(2) + "\n", flags.out);
  if (report.build_count != 1) {
    std::cerr << "graph was rebuilt " << report.build_count << " times\n";
    return kVerificationFailure;
  }
  return kOk;
}

int run_kernel_gram(const std::string& config_path, int points,
                    const CommonFlags& flags) {
  const std::string text = read_file(config_path);
  const Json config = parse_json(text);
  if (!config.contains("input_state") || !config.at("input_state").is_string()) {
    throw bf::ParseError("kernel config: input_state string required");
  }
  bf::kernel::KernelSpec spec{
      bf::serialize::circuit_from_json(text),
      bf::FockState::parse(config.at("input_state").get<std::string>())};
  if (config.contains("cache_states")) {
    spec.cache_states = config.at("cache_states").get<bool>();
  }
  const bf::kernel::FidelityKernel kernel(std::move(spec));

  const int fcount = kernel.spec().circuit.input_feature_count();
  std::mt19937_64 rng(flags.seed);
  std::uniform_real_distribution<double> dist(0.0, 3.14159265358979323846);
  bf::RMatrix x(points, fcount);
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < fcount; ++j) x(i, j) = dist(rng);
  }
  const bf::RMatrix gram = kernel.gram(x, flags.threads);

  if (flags.format == "json") {
    Json j;
    j["points"] = points;
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < gram.cols(); ++k) row.push_back(gram(i, k));
      rows.push_back(std::move(row));
    }
    j["gram"] = std::move(rows);
    write_result(j.dump(2) + "\n", flags.out);
  } else {
    std::string csv;
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
      for (Eigen::Index k = 0; k < gram.cols(); ++k) {
        if (k > 0) csv += ',';
        csv += format_double(gram(i, k));
      }
      csv += '\n';
    }
    write_result(csv, flags.out);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bosonflow: exact differentiable linear-optics simulation"};
  app.require_subcommand(1);

  CommonFlags sim_flags;
  std::string sim_config;
  auto* simulate = app.add_subcommand("simulate", "Run a layer config and print outputs");
  simulate->add_option("--config", sim_config, "Layer spec JSON file")->required();
  add_common(simulate, &sim_flags);

  CommonFlags verify_flags;
  int verify_max_m = 5;
  int verify_max_n = 4;
  int verify_trials = 50;
  double verify_perturb = 0.0;
  auto* verify =
      app.add_subcommand("verify", "Cross-check the engine against the oracle");
  verify->add_option("--max-m", verify_max_m, "Largest mode count")
      ->check(CLI::PositiveNumber);
  verify->add_option("--max-n", verify_max_n, "Largest photon count")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--trials", verify_trials, "Trials per (m, n) case")
      ->check(CLI::PositiveNumber);
  verify->add_option("--perturb", verify_perturb, "Fault-injection offset")->group("");
  add_common(verify, &verify_flags);

  CommonFlags fourier_flags;
  fourier_flags.format = "csv";
  int fourier_photons = 3;
  int fourier_degree = 3;
  std::string fourier_target;
  int fourier_steps = 2000;
  double fourier_lr = 0.05;
  auto* fit_fourier =
      app.add_subcommand("fit-fourier", "Fit a Fourier series with the sandwich model");
  fit_fourier->add_option("--photons", fourier_photons, "Photon count (1 to 6)");
  fit_fourier->add_option("--degree", fourier_degree,
                          "Random target degree when no --target file is given")
      ->check(CLI::NonNegativeNumber);
  fit_fourier->add_option("--target", fourier_target,
                          "JSON file {constant, cos, sin} with the target series");
  fit_fourier->add_option("--steps", fourier_steps, "Adam steps")
      ->check(CLI::NonNegativeNumber);
  fit_fourier->add_option("--lr", fourier_lr, "Initial Adam learning rate");
  add_common(fit_fourier, &fourier_flags);

  CommonFlags moons_flags;
  int moons_samples = 200;
  double moons_noise = 0.1;
  int moons_epochs = 200;
  double moons_lr = 0.1;
  int moons_grid = 100;
  auto* moons =
      app.add_subcommand("classify-moons", "Train the binary moons classifier");
  moons->add_option("--samples", moons_samples, "Dataset size")
      ->check(CLI::PositiveNumber);
  moons->add_option("--noise", moons_noise, "Gaussian noise standard deviation");
  moons->add_option("--epochs", moons_epochs, "Training epochs")
      ->check(CLI::NonNegativeNumber);
  moons->add_option("--lr", moons_lr, "Adam learning rate");
  moons->add_option("--grid", moons_grid, "Decision-boundary raster resolution")
      ->check(CLI::PositiveNumber);
  add_common(moons, &moons_flags);

  CommonFlags bench_flags;
  int bench_modes = 10;
  int bench_photons = 5;
  int bench_batch = 100;
  int bench_repeats = 1;
  auto* bench = app.add_subcommand("bench", "Time graph build and forwards");
  bench->add_option("--modes", bench_modes, "Mode count")->check(CLI::PositiveNumber);
  bench->add_option("--photons", bench_photons, "Photon count")
      ->check(CLI::PositiveNumber);
  bench->add_option("--batch", bench_batch, "Forwards per repeat")
      ->check(CLI::PositiveNumber);
  bench->add_option("--repeats", bench_repeats, "Repeat count")
      ->check(CLI::PositiveNumber);
  add_common(bench, &bench_flags, false);

  CommonFlags gram_flags;
  gram_flags.format = "csv";
  std::string gram_config;
  int gram_points = 40;
  auto* gram = app.add_subcommand("kernel-gram", "Emit a fidelity Gram matrix");
  gram->add_option("--config", gram_config,
                   "Kernel config JSON (circuit plus input_state)")
      ->required();
  gram->add_option("--points", gram_points, "Number of random feature rows")
      ->check(CLI::PositiveNumber);
  add_common(gram, &gram_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim_config, sim_flags);
    if (verify->parsed()) {
      return run_verify(verify_max_m, verify_max_n, verify_trials, verify_perturb,
                        verify_flags);
    }
    if (fit_fourier->parsed()) {
      return run_fit_fourier(fourier_photons, fourier_degree, fourier_target,
                             fourier_steps, fourier_lr, fourier_flags);
    }
    if (moons->parsed()) {
      return run_classify_moons(moons_samples, moons_noise, moons_epochs, moons_lr,
                                moons_grid, moons_flags);
    }
    if (bench->parsed()) {
      return run_bench(bench_modes, bench_photons, bench_batch, bench_repeats,
                       bench_flags);
    }
    if (gram->parsed()) return run_kernel_gram(gram_config, gram_points, gram_flags);
  } catch (const bf::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const bf::InvalidSpec& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const bf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kConfigError;
}
