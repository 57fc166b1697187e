// Copyright (c) the jndopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// jndopt command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jndopt/jndopt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitIo = 2;
constexpr int kExitInfeasible = 3;

int ExitCodeFor(jndopt_status status) {
  switch (status) {
    case JNDOPT_OK:
      return kExitOk;
    case JNDOPT_ERR_PARTIAL:
      return kExitPartial;
    case JNDOPT_ERR_DOMAIN:
      return kExitInfeasible;
    default:
      return kExitIo;
  }
}

int Report(jndopt_status status) {
  if (status != JNDOPT_OK) {
    std::fprintf(stderr, "jndopt: %s: %s\n", jndopt_status_name(status),
                 jndopt_last_error());
  }
  return ExitCodeFor(status);
}

bool ParseWeights(const std::string& text, double out[3]) {
  std::stringstream ss(text);
  std::string part;
  int n = 0;
  while (std::getline(ss, part, ',')) {
    if (n == 3) return false;
    try {
      std::size_t used = 0;
      out[n] = std::stod(part, &used);
      if (used != part.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
    ++n;
  }
  return n == 3;
}

bool ParseAdjustor(const std::string& text, jndopt_adjustor* out) {
  if (text == "aware") {
    out->fixed_value = 0.0;
    return true;
  }
  const std::string prefix = "fixed:";
  if (text.rfind(prefix, 0) != 0) return false;
  try {
    std::size_t used = 0;
    const std::string num = text.substr(prefix.size());
    const double v = std::stod(num, &used);
    if (used != num.size() || !(v > 0.0)) return false;
    out->fixed_value = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"JND-based perceptual loss, metrics and distortion assignment"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", jndopt_version());

  jndopt_run_config config = jndopt_run_config_default();
  std::string weights_text;
  std::string adjustor_text = "aware";
  std::string out;
  app.add_option("--weights", weights_text,
                 "Per-channel JND scale factors r,g,b (default 1.4,1,2.2)");
  app.add_option("--t-floor", config.t_floor, "Minimum JND threshold")
      ->capture_default_str();
  app.add_option("--adjustor", adjustor_text, "aware | fixed:<value>")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", config.jobs, "Worker threads")->capture_default_str();
  app.add_option("--out", out, "Output path (file for jnd/eval, dir otherwise)");

  std::string input;
  std::string vis;
  auto* jnd = app.add_subcommand("jnd", "Compute a JND map for a PNG image");
  jnd->add_option("input", input, "Input PNG")->required();
  jnd->add_option("--vis", vis, "Write an 8-bit visualization PNG");

  std::string curves;
  std::string jnd_dir;
  auto* eval = app.add_subcommand("eval", "Evaluate a manifest of image pairs");
  eval->add_option("manifest", input, "Manifest CSV")->required();
  eval->add_option("--curves", curves, "Write RD-curve points CSV");
  eval->add_option("--jnd-dir", jnd_dir,
                   "Directory of <stem>.jndm maps to use instead of the "
                   "classical model");

  double target_mse = 25.0;
  int iters = 500;
  double step = 0.5;
  auto* assign =
      app.add_subcommand("assign", "Fixed-budget distortion assignment");
  assign->add_option("input", input, "Input PNG")->required();
  assign->add_option("--target-mse", target_mse, "Distortion budget")
      ->capture_default_str();
  assign->add_option("--iters", iters, "Maximum iterations")
      ->capture_default_str();
  assign->add_option("--step", step, "Gradient step size")
      ->capture_default_str();

  double k = 10.0;
  auto* inject = app.add_subcommand("inject", "Inject k x JND sign noise");
  inject->add_option("input", input, "Input PNG")->required();
  inject->add_option("--k", k, "JND multiple")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitIo;
  }

  if (!weights_text.empty() && !ParseWeights(weights_text, config.weights)) {
    std::fprintf(stderr, "jndopt: --weights expects r,g,b\n");
    return kExitInfeasible;
  }
  if (!ParseAdjustor(adjustor_text, &config.adjustor)) {
    std::fprintf(stderr, "jndopt: --adjustor expects aware or fixed:<v>\n");
    return kExitInfeasible;
  }
  if (out.empty()) {
    std::fprintf(stderr, "jndopt: --out is required\n");
    return kExitIo;
  }

  if (jnd->parsed()) {
    return Report(jndopt_cmd_jnd(&config, input.c_str(), out.c_str(),
                                 vis.empty() ? nullptr : vis.c_str()));
  }
  if (eval->parsed()) {
    return Report(jndopt_cmd_eval(
        &config, input.c_str(), out.c_str(),
        curves.empty() ? nullptr : curves.c_str(),
        jnd_dir.empty() ? nullptr : jnd_dir.c_str()));
  }
  if (assign->parsed()) {
    return Report(jndopt_cmd_assign(&config, input.c_str(), out.c_str(),
                                    target_mse, iters, step));
  }
  return Report(jndopt_cmd_inject(&config, input.c_str(), out.c_str(), k));
}
