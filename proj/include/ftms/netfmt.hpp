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

#ifndef FTMS_NETFMT_HPP_
#define FTMS_NETFMT_HPP_

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ftms/engine.hpp"

/// The .ftms network language and the state/graph writers.
///
///   file      := (statement | comment | blank)*
///   statement := "assume" IDENT
///              | "fact" IDENT "from" IDENT "tv" NUMBER
///              | "rule" IDENT ":" IDENT ("," IDENT)* "->" (IDENT | "FALSE") "w" NUMBER
///              | "just" IDENT ":" IDENT ("," IDENT)* "->" (IDENT | "FALSE")
///                       "c" NUMBER "cr" NUMBER            (replay files only)
///   comment   := "#" to end of line
///
/// Keywords are case-insensitive. NUMBER is a plain decimal (-?d+(.d+)?).
namespace ftms::netfmt {

struct SourcePos {
  int line = 0;
  int column = 0;
};

struct AssumeStmt {
  std::string name;
  friend bool operator==(const AssumeStmt&, const AssumeStmt&) = default;
};

struct FactStmt {
  std::string atom;
  std::string source;
  double tv = 0;
  friend bool operator==(const FactStmt&, const FactStmt&) = default;
  std::string id() const { return atom + "@" + source; }
};

struct RuleStmt {
  std::string id;
  std::vector<std::string> antecedents;
  std::string consequent;  // "FALSE" for contradiction rules
  double weight = 0;
  friend bool operator==(const RuleStmt&, const RuleStmt&) = default;
};

/// Pre-annotated justification: (c, c_r) as computed by an outside solver.
struct JustStmt {
  std::string id;
  std::vector<std::string> antecedents;
  std::string consequent;
  double c = 0;
  double cr = 0;
  friend bool operator==(const JustStmt&, const JustStmt&) = default;
};

using StatementBody = std::variant<AssumeStmt, FactStmt, RuleStmt, JustStmt>;

struct Statement {
  StatementBody body;
  SourcePos pos;
};

struct NetworkFile {
  std::vector<Statement> statements;

  /// Statement bodies only; positions are ignored.
  friend bool operator==(const NetworkFile& a, const NetworkFile& b);
};

enum class ErrorKind { syntax, semantic };

class ParseError : public std::runtime_error {
 public:
  ParseError(ErrorKind kind, SourcePos pos, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }
  SourcePos pos() const noexcept { return pos_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  SourcePos pos_;
  std::string message_;
};

struct ParseOptions {
  bool allow_asserted = false;  // accept "just" statements
};

/// Names seen so far; lets a session validate statements one at a time.
class SymbolTable {
 public:
  bool is_assumption(const std::string& name) const { return assumptions_.count(name) > 0; }
  bool is_atom(const std::string& name) const { return atoms_.count(name) > 0; }
  bool has_id(const std::string& id) const { return ids_.count(id) > 0; }

  void add_assumption(const std::string& name) { assumptions_.insert(name); }
  void add_atom(const std::string& name) { atoms_.insert(name); }
  void add_id(const std::string& id) { ids_.insert(id); }
  void remove_id(const std::string& id) { ids_.erase(id); }

 private:
  std::set<std::string> assumptions_;
  std::set<std::string> atoms_;
  std::set<std::string> ids_;  // rule, just and fact ("atom@source") ids
};

NetworkFile parse(std::string_view text, ParseOptions options = {});

/// Parses one line against `symbols`, recording the new names on success.
/// Returns nothing for blank and comment lines.
std::optional<Statement> parse_statement(std::string_view line, int line_no,
                                         SymbolTable& symbols, ParseOptions options = {});

/// Shortest decimal text that reads back to the same double.
std::string format_decimal(double v);

/// Fixed 9-decimal text used by every report.
std::string format_fixed(double v);

std::string serialize_statement(const StatementBody& s);

/// One statement per line, normalized spacing, no comments.
std::string serialize_network(const NetworkFile& file);

/// JSON document: thresholds, nodes with their reported labels, falsity's
/// label and the MEDB. Numbers carry 9 decimals.
std::string serialize_state(const Engine& engine);

/// Human-readable labels and MEDB.
std::string format_table(const Engine& engine);

/// Graphviz digraph: ellipses for derived nodes, boxes for assumptions,
/// diamonds for justifications, falsity drawn in red as the bottom symbol.
std::string export_dot(const Engine& engine);

std::string format_env(const Engine& engine, const Environment& env);

}  // namespace ftms::netfmt

#endif  // FTMS_NETFMT_HPP_
