// Copyright 2026 The FTMS Authors. All Rights Reserved.
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

// ftms run FILE [--alpha A] [--beta B] [--format table|json|dot] [--quiet] [--replay]
// ftms repl [--alpha A] [--beta B]

#include <unistd.h>

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "ftms/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy truth maintenance over weighted rule networks"};
  app.require_subcommand(1);

  ftms::cli::Options options;
  std::string path;
  const std::map<std::string, ftms::cli::Format> formats{{"table", ftms::cli::Format::table},
                                                         {"json", ftms::cli::Format::json},
                                                         {"dot", ftms::cli::Format::dot}};

  auto add_thresholds = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", options.alpha, "minimum reported consistency")
        ->check(CLI::Range(-1.0, 1.0));
    cmd->add_option("--beta", options.beta, "minimum confidence of resolution")
        ->check(CLI::Range(0.0, 1.0));
  };

  CLI::App* run = app.add_subcommand("run", "run a network file and print the result");
  run->add_option("file", path, "network file (.ftms)")->required();
  add_thresholds(run);
  run->add_option("--format", options.format, "table, json or dot")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  run->add_flag("--quiet", options.quiet, "print only errors and the final report");
  run->add_flag("--replay", options.replay, "accept pre-annotated 'just' statements");

  CLI::App* repl = app.add_subcommand("repl", "interactive session");
  add_thresholds(repl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ftms::cli::kExitSemantic;
  }

  if (run->parsed()) return ftms::cli::run_batch(path, options, std::cout, std::cerr);
  return ftms::cli::run_repl(options, std::cin, std::cout, std::cerr, isatty(STDIN_FILENO) != 0);
}
