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

#ifndef FTMS_CLI_HPP_
#define FTMS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ftms/engine.hpp"
#include "ftms/inference.hpp"
#include "ftms/netfmt.hpp"

namespace ftms::cli {

enum class Format { table, json, dot };

struct Options {
  double alpha = -1.0;
  double beta = 0.0;
  Format format = Format::table;
  bool quiet = false;
  bool replay = false;  // accept "just" statements in files
};

/// Exit statuses shared by batch runs and the executable.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSyntax = 1;
inline constexpr int kExitSemantic = 2;

/// Engine plus the symbol table and the statements currently in force.
/// Batch runs and the interactive loop both go through apply(), which keeps
/// their final states identical.
class Session {
 public:
  explicit Session(const Options& options = {});

  UpdateReport apply(const netfmt::Statement& statement);

  /// Runs one interactive command. Returns false once the user quits.
  bool execute(std::string_view line, std::ostream& out, std::ostream& err);

  /// Saturates the rules and facts in force with the forward chainer.
  std::vector<inference::DerivedAtom> derivations() const;

  std::string report(Format format) const;

  const Engine& engine() const noexcept { return engine_; }
  netfmt::SymbolTable& symbols() noexcept { return symbols_; }

 private:
  void load(const std::string& path, std::ostream& out, std::ostream& err);
  void print_report(const UpdateReport& r, std::ostream& out) const;
  void print_label(NodeId n, std::ostream& out) const;
  void forget(const std::string& id);

  Options options_;
  Engine engine_;
  netfmt::SymbolTable symbols_;
  std::vector<netfmt::StatementBody> active_;
  int line_no_ = 0;
};

/// Parses and runs a whole file, writing the final report to `out` and
/// diagnostics to `err`.
int run_batch(const std::string& path, const Options& options, std::ostream& out,
              std::ostream& err);

/// Reads commands from `in` until end of input or quit.
int run_repl(const Options& options, std::istream& in, std::ostream& out, std::ostream& err,
             bool prompt);

std::string usage();

}  // namespace ftms::cli

#endif  // FTMS_CLI_HPP_
