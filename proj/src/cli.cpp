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

#include "ftms/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ftms::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool read_number(const std::string& text, double& v) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

std::string statement_id(const netfmt::StatementBody& body) {
  if (auto* f = std::get_if<netfmt::FactStmt>(&body)) return f->id();
  if (auto* r = std::get_if<netfmt::RuleStmt>(&body)) return r->id;
  if (auto* j = std::get_if<netfmt::JustStmt>(&body)) return j->id;
  return {};
}

}  // namespace

std::string usage() {
  return "commands:\n"
         "  load FILE\n"
         "  assume NAME\n"
         "  fact ATOM from ASSUMPTION tv N\n"
         "  rule ID: A, B -> C w N\n"
         "  just ID: A, B -> C c N cr N\n"
         "  retract ID\n"
         "  revise ID w N | revise ID c N cr N\n"
         "  label ATOM\n"
         "  context A1,A2\n"
         "  medb\n"
         "  derive\n"
         "  state\n"
         "  set-alpha N\n"
         "  set-beta N\n"
         "  export-dot FILE\n"
         "  help\n"
         "  quit\n";
}

Session::Session(const Options& options) : options_(options) {
  engine_.set_thresholds({options.alpha, options.beta});
}

UpdateReport Session::apply(const netfmt::Statement& statement) {
  UpdateReport report;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, netfmt::AssumeStmt>) {
          engine_.create_assumption(s.name);
        } else if constexpr (std::is_same_v<T, netfmt::FactStmt>) {
          auto source = engine_.find_assumption(s.source);
          if (!source) throw EngineError("undeclared assumption " + s.source);
          report = engine_.justify_given(s.id(), {engine_.node_of(*source)},
                                         engine_.intern(s.atom),
                                         truth_to_confidence(TruthValue(s.tv)),
                                         ResolutionConfidence(1.0));
        } else {
          std::vector<NodeId> ants;
          for (const auto& a : s.antecedents) ants.push_back(engine_.intern(a));
          NodeId cons = engine_.intern(s.consequent);
          if constexpr (std::is_same_v<T, netfmt::RuleStmt>) {
            report = engine_.justify(s.id, std::move(ants), cons, RuleWeight(s.weight));
          } else {
            report = engine_.justify_given(s.id, std::move(ants), cons, Confidence(s.c),
                                           ResolutionConfidence(s.cr));
          }
        }
      },
      statement.body);
  active_.push_back(statement.body);
  return report;
}

std::vector<inference::DerivedAtom> Session::derivations() const {
  inference::Engine solver;
  for (const auto& body : active_) {
    if (auto* f = std::get_if<netfmt::FactStmt>(&body))
      solver.add_fact({f->atom, TruthValue(f->tv), f->source});
    else if (auto* r = std::get_if<netfmt::RuleStmt>(&body))
      solver.add_rule({r->id, r->antecedents, r->consequent, RuleWeight(r->weight)});
  }
  return solver.saturate();
}

std::string Session::report(Format format) const {
  switch (format) {
    case Format::json:
      return netfmt::serialize_state(engine_);
    case Format::dot:
      return netfmt::export_dot(engine_);
    case Format::table:
      break;
  }
  std::string out = netfmt::format_table(engine_);
  auto derived = derivations();
  if (!derived.empty()) {
    out += "derivations\n";
    for (const auto& d : derived) {
      out += "  " + d.atom + "  c=" + netfmt::format_fixed(d.c.value()) +
             " cr=" + netfmt::format_fixed(d.cr.value()) + "  via ";
      for (std::size_t i = 0; i < d.support.size(); ++i)
        out += (i ? ", " : "") + d.support[i];
      out += "\n";
    }
  }
  return out;
}

void Session::print_report(const UpdateReport& r, std::ostream& out) const {
  if (r.empty()) {
    out << "no change\n";
    return;
  }
  if (!r.changed.empty()) {
    out << "changed:";
    for (std::size_t i = 0; i < r.changed.size(); ++i)
      out << (i ? ", " : " ") << engine_.name(r.changed[i]);
    out << (r.medb_changed ? "; " : "\n");
  }
  if (r.medb_changed) out << "MEDB changed\n";
}

void Session::print_label(NodeId n, std::ostream& out) const {
  const auto& label = engine_.label(n);
  if (label.empty()) out << "(empty)\n";
  for (const LabelEntry& e : label)
    out << netfmt::format_env(engine_, e.env) << "  c=" << netfmt::format_fixed(e.c.value())
        << " cr=" << netfmt::format_fixed(e.cr.value())
        << " crc=" << netfmt::format_fixed(e.crc) << " cs=" << netfmt::format_fixed(e.cs)
        << "\n";
}

void Session::forget(const std::string& id) {
  symbols_.remove_id(id);
  active_.erase(std::remove_if(active_.begin(), active_.end(),
                               [&](const auto& b) { return statement_id(b) == id; }),
                active_.end());
}

void Session::load(const std::string& path, std::ostream& out, std::ostream& err) {
  std::string text;
  if (!read_file(path, text)) {
    err << "error: cannot read " << path << "\n";
    return;
  }
  // Parse everything first so a bad file changes nothing.
  netfmt::SymbolTable scratch = symbols_;
  std::vector<netfmt::Statement> statements;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  try {
    while (std::getline(lines, line)) {
      auto s = netfmt::parse_statement(line, ++line_no, scratch, {true});
      if (s) statements.push_back(std::move(*s));
    }
  } catch (const netfmt::ParseError& e) {
    err << path << ":" << e.what() << "\n";
    return;
  }
  symbols_ = std::move(scratch);
  UpdateReport total;
  std::vector<NodeId> changed;
  for (const auto& s : statements) {
    UpdateReport r = apply(s);
    changed.insert(changed.end(), r.changed.begin(), r.changed.end());
    total.medb_changed = total.medb_changed || r.medb_changed;
  }
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
  total.changed = std::move(changed);
  out << "loaded " << statements.size() << " statements\n";
  print_report(total, out);
}

bool Session::execute(std::string_view raw, std::ostream& out, std::ostream& err) {
  ++line_no_;
  std::string_view line = trim(raw);
  if (line.empty() || line.front() == '#') return true;
  std::size_t space = line.find_first_of(" \t");
  std::string command = lower(line.substr(0, space));
  std::string_view rest = space == std::string_view::npos ? "" : trim(line.substr(space));
  std::vector<std::string> args = split_words(rest);

  try {
    if (command == "quit" || command == "exit") return false;
    if (command == "help") {
      out << usage();
    } else if (command == "assume" || command == "fact" || command == "rule" ||
               command == "just") {
      auto s = netfmt::parse_statement(line, line_no_, symbols_, {true});
      if (s) print_report(apply(*s), out);
    } else if (command == "load" && args.size() == 1) {
      load(args[0], out, err);
    } else if (command == "retract" && args.size() == 1) {
      auto j = engine_.find_justification(args[0]);
      if (!j || !engine_.justification(*j).active) {
        err << "error: no active justification " << args[0] << "\n";
      } else {
        print_report(engine_.retract_justification(*j), out);
        forget(args[0]);
      }
    } else if (command == "revise" && (args.size() == 3 || args.size() == 5)) {
      auto j = engine_.find_justification(args[0]);
      double a = 0, b = 0;
      bool weighted = args.size() == 3 && lower(args[1]) == "w" && read_number(args[2], a);
      bool asserted = args.size() == 5 && lower(args[1]) == "c" && lower(args[3]) == "cr" &&
                      read_number(args[2], a) && read_number(args[4], b);
      if (!j || !engine_.justification(*j).active) {
        err << "error: no active justification " << args[0] << "\n";
      } else if (!weighted && !asserted) {
        err << "error: usage: revise ID w N | revise ID c N cr N\n";
      } else {
        JustificationMode mode = weighted ? JustificationMode(Weighted{RuleWeight(a)})
                                          : JustificationMode(Asserted{
                                                Confidence(a), ResolutionConfidence(b)});
        print_report(engine_.revise_justification(*j, mode), out);
        for (auto& body : active_) {
          if (statement_id(body) != args[0]) continue;
          if (auto* r = std::get_if<netfmt::RuleStmt>(&body); r && weighted) r->weight = a;
          if (auto* js = std::get_if<netfmt::JustStmt>(&body); js && asserted) {
            js->c = a;
            js->cr = b;
          }
        }
      }
    } else if (command == "label" && args.size() == 1) {
      auto n = engine_.find_node(args[0] == "FALSE" ? std::string(kFalsityName) : args[0]);
      if (!n) {
        err << "error: unknown node " << args[0] << "\n";
      } else {
        print_label(*n, out);
      }
    } else if (command == "context") {
      Environment env;
      for (const auto& name : args) {
        auto a = engine_.find_assumption(name);
        if (!a) throw EngineError("unknown assumption " + name);
        env.insert(*a);
      }
      auto nodes = engine_.context(env);
      for (std::size_t i = 0; i < nodes.size(); ++i)
        out << (i ? ", " : "") << engine_.name(nodes[i]);
      out << "\ncs=" << netfmt::format_fixed(engine_.consistency(env)) << "\n";
    } else if (command == "medb" && args.empty()) {
      if (engine_.medb().empty()) out << "(empty)\n";
      for (const NogoodRecord& r : engine_.medb())
        out << netfmt::format_env(engine_, r.env) << "  cs=" << netfmt::format_fixed(r.cs)
            << "\n";
    } else if ((command == "set-alpha" || command == "set-beta") && args.size() == 1) {
      double v = 0;
      if (!read_number(args[0], v)) {
        err << "error: not a number: " << args[0] << "\n";
      } else {
        Thresholds t = engine_.thresholds();
        (command == "set-alpha" ? t.alpha : t.beta) = v;
        engine_.set_thresholds(t);
        out << "alpha=" << netfmt::format_fixed(t.alpha)
            << " beta=" << netfmt::format_fixed(t.beta) << "\n";
      }
    } else if (command == "export-dot" && args.size() == 1) {
      std::ofstream file(args[0], std::ios::binary);
      if (!file) {
        err << "error: cannot write " << args[0] << "\n";
      } else {
        file << netfmt::export_dot(engine_);
        out << "wrote " << args[0] << "\n";
      }
    } else if (command == "state" && args.empty()) {
      out << netfmt::serialize_state(engine_);
    } else if (command == "derive" && args.empty()) {
      for (const auto& d : derivations())
        out << d.atom << "  c=" << netfmt::format_fixed(d.c.value())
            << " cr=" << netfmt::format_fixed(d.cr.value()) << "\n";
    } else {
      err << "error: unknown command or bad arguments: " << line << "\n"
          << "type 'help' for the list of commands\n";
    }
  } catch (const netfmt::ParseError& e) {
    err << "error: " << e.message() << " (column " << e.pos().column << ")\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return true;
}

int run_batch(const std::string& path, const Options& options, std::ostream& out,
              std::ostream& err) {
  std::string text;
  if (!read_file(path, text)) {
    err << "error: cannot read " << path << "\n";
    return kExitSemantic;
  }
  netfmt::NetworkFile file;
  try {
    file = netfmt::parse(text, {options.replay});
  } catch (const netfmt::ParseError& e) {
    err << path << ":" << e.pos().line << ":" << e.pos().column << ": "
        << (e.kind() == netfmt::ErrorKind::syntax ? "syntax" : "semantic")
        << " error: " << e.message() << "\n";
    return e.kind() == netfmt::ErrorKind::syntax ? kExitSyntax : kExitSemantic;
  }

  Session session(options);
  try {
    for (const auto& s : file.statements) session.apply(s);
  } catch (const std::exception& e) {
    err << path << ": error: " << e.what() << "\n";
    return kExitSemantic;
  }
  if (!options.quiet) {
    err << path << ": " << file.statements.size() << " statements, "
        << session.engine().node_count() << " nodes, "
        << session.engine().justifications().size() << " justifications, "
        << session.engine().medb().size() << " nogoods\n";
  }
  out << session.report(options.format);
  return kExitOk;
}

int run_repl(const Options& options, std::istream& in, std::ostream& out, std::ostream& err,
             bool prompt) {
  Session session(options);
  std::string line;
  while (true) {
    if (prompt) out << "ftms> " << std::flush;
    if (!std::getline(in, line)) break;
    if (!session.execute(line, out, err)) break;
  }
  return kExitOk;
}

}  // namespace ftms::cli
