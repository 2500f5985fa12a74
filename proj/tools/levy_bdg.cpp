/*
   Copyright 2026 The levy_bdg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// levy_bdg run|sweep --config FILE [--seed U64] [--threads K] [--out DIR]
//                    [--format json|csv|both] [--timing]
//
// Exit status: 0 when every verdict is acceptable, 2 when any verdict fails,
// 1 on configuration or runtime errors.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "levy_bdg/experiment.hpp"
#include "levy_bdg/parallel.hpp"

namespace {

struct Args {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out = "out";
  levy_bdg::OutputFormat format = levy_bdg::OutputFormat::both;
  bool timing = false;
};

void add_common(CLI::App& cmd, Args& a) {
  cmd.add_option("--config", a.config, "experiment config (JSON)")->required();
  cmd.add_option("--seed", a.seed, "overrides the config seed");
  cmd.add_option("--threads", a.threads, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--out", a.out, "output directory")->capture_default_str();
  const std::map<std::string, levy_bdg::OutputFormat> formats{
      {"json", levy_bdg::OutputFormat::json},
      {"csv", levy_bdg::OutputFormat::csv},
      {"both", levy_bdg::OutputFormat::both}};
  cmd.add_option("--format", a.format, "json, csv or both")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  cmd.add_flag("--timing", a.timing, "record measured runtimes (outputs stop being byte-stable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for BDG-type inequalities of compensated Poisson integrals"};
  app.require_subcommand(1);
  Args args;
  CLI::App* run = app.add_subcommand("run", "run every experiment of a config");
  CLI::App* sweep = app.add_subcommand("sweep", "run a config once per value of its ranged parameter");
  add_common(*run, args);
  add_common(*sweep, args);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    levy_bdg::RunOptions options;
    options.seed = args.seed;
    options.threads = levy_bdg::resolve_threads(args.threads);
    options.out_dir = args.out;
    options.format = args.format;
    options.timing = args.timing;
    const nlohmann::json config = levy_bdg::load_config(args.config);
    const bool sweeping = sweep->parsed();
    const levy_bdg::RunResult result = sweeping ? levy_bdg::sweep_config(config, options)
                                                : levy_bdg::run_config(config, options);
    levy_bdg::write_outputs(result, options, sweeping ? "sweep" : "report", sweeping);
    std::size_t fails = 0;
    for (const auto& r : result.rows) fails += r.verdict == "fail" ? 1 : 0;
    std::cerr << result.rows.size() << " rows, " << fails << " failing; written to "
              << options.out_dir.string() << '\n';
    return result.exit_code;
  } catch (const levy_bdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
