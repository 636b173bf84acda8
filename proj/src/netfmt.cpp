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

#include "ftms/netfmt.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace ftms::netfmt {

namespace {

const char* const kFalse = "FALSE";

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

struct Token {
  enum Kind { ident, number, colon, comma, arrow, end } kind;
  std::string text;
  int column;
};

bool ident_start(char ch) { return std::isalpha(static_cast<unsigned char>(ch)) != 0; }
bool ident_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) != 0 || ch == '_';
}
bool digit(char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; }

std::vector<Token> tokenize(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](std::size_t at, const std::string& msg) {
    throw ParseError(ErrorKind::syntax, {line_no, static_cast<int>(at) + 1}, msg);
  };
  while (i < line.size()) {
    char ch = line[i];
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
    } else if (ch == '#') {
      break;
    } else if (ident_start(ch)) {
      std::size_t start = i;
      while (i < line.size() && ident_char(line[i])) ++i;
      out.push_back({Token::ident, std::string(line.substr(start, i - start)),
                     static_cast<int>(start) + 1});
    } else if (ch == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({Token::arrow, "->", static_cast<int>(i) + 1});
      i += 2;
    } else if (digit(ch) || ch == '-') {
      std::size_t start = i;
      if (ch == '-') ++i;
      if (i >= line.size() || !digit(line[i])) fail(start, "malformed number");
      while (i < line.size() && digit(line[i])) ++i;
      if (i < line.size() && line[i] == '.') {
        ++i;
        if (i >= line.size() || !digit(line[i])) fail(start, "malformed number");
        while (i < line.size() && digit(line[i])) ++i;
      }
      if (i < line.size() && (ident_char(line[i]) || line[i] == '.'))
        fail(start, "malformed number");
      out.push_back({Token::number, std::string(line.substr(start, i - start)),
                     static_cast<int>(start) + 1});
    } else if (ch == ':') {
      out.push_back({Token::colon, ":", static_cast<int>(i) + 1});
      ++i;
    } else if (ch == ',') {
      out.push_back({Token::comma, ",", static_cast<int>(i) + 1});
      ++i;
    } else {
      fail(i, std::string("unexpected character '") + ch + "'");
    }
  }
  int end_col = static_cast<int>(line.size()) + 1;
  while (end_col > 1 && (line[end_col - 2] == '\r' || line[end_col - 2] == ' ')) --end_col;
  out.push_back({Token::end, "", end_col});
  return out;
}

class StatementParser {
 public:
  StatementParser(std::vector<Token> tokens, int line_no, SymbolTable& symbols,
                  ParseOptions options)
      : tokens_(std::move(tokens)), line_(line_no), symbols_(symbols), options_(options) {}

  Statement parse() {
    const Token& head = peek();
    if (head.kind != Token::ident) syntax(head, "expected a statement keyword");
    std::string keyword = lower(head.text);
    SourcePos pos{line_, head.column};
    StatementBody body;
    if (keyword == "assume") {
      body = parse_assume();
    } else if (keyword == "fact") {
      body = parse_fact();
    } else if (keyword == "rule") {
      body = parse_rule();
    } else if (keyword == "just") {
      if (!options_.allow_asserted)
        syntax(head, "'just' statements are only accepted in replay mode");
      body = parse_just();
    } else {
      syntax(head, "unknown statement '" + head.text + "'");
    }
    return {std::move(body), pos};
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void syntax(const Token& at, const std::string& msg) const {
    throw ParseError(ErrorKind::syntax, {line_, at.column}, msg);
  }
  [[noreturn]] void semantic(const Token& at, const std::string& msg) const {
    throw ParseError(ErrorKind::semantic, {line_, at.column}, msg);
  }

  const Token& expect(Token::Kind kind, const char* what) {
    const Token& t = next();
    if (t.kind != kind) syntax(t, std::string("expected ") + what);
    return t;
  }

  const Token& expect_keyword(const char* word) {
    const Token& t = next();
    if (t.kind != Token::ident || lower(t.text) != word)
      syntax(t, std::string("expected '") + word + "'");
    return t;
  }

  void expect_end() {
    const Token& t = next();
    if (t.kind != Token::end) syntax(t, "unexpected '" + t.text + "' after statement");
  }

  double number(const Token& t) const {
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() || !std::isfinite(v))
      syntax(t, "malformed number");
    return v;
  }

  static bool is_false(const Token& t) { return lower(t.text) == "false"; }

  AssumeStmt parse_assume() {
    next();
    const Token& name = expect(Token::ident, "an assumption name");
    expect_end();
    if (is_false(name)) semantic(name, "FALSE cannot be assumed");
    if (symbols_.is_assumption(name.text)) semantic(name, "duplicate assumption " + name.text);
    if (symbols_.is_atom(name.text))
      semantic(name, name.text + " is already used as an atom");
    symbols_.add_assumption(name.text);
    return {name.text};
  }

  FactStmt parse_fact() {
    next();
    const Token& atom = expect(Token::ident, "an atom");
    expect_keyword("from");
    const Token& source = expect(Token::ident, "an assumption");
    expect_keyword("tv");
    const Token& tv = expect(Token::number, "a truth value");
    expect_end();

    if (is_false(atom)) semantic(atom, "FALSE cannot be asserted as a fact");
    if (symbols_.is_assumption(atom.text))
      semantic(atom, atom.text + " is an assumption, not an atom");
    if (!symbols_.is_assumption(source.text))
      semantic(source, "undeclared assumption " + source.text);
    double v = number(tv);
    if (v < 0.0 || v > 1.0) semantic(tv, "truth value must lie in [0,1]");
    FactStmt f{atom.text, source.text, v};
    if (symbols_.has_id(f.id())) semantic(atom, "duplicate fact " + f.id());
    symbols_.add_atom(atom.text);
    symbols_.add_id(f.id());
    return f;
  }

  struct Clause {
    const Token* id;
    std::vector<const Token*> antecedents;
    const Token* consequent;
  };

  Clause parse_clause() {
    next();
    Clause c{};
    c.id = &expect(Token::ident, "an identifier");
    expect(Token::colon, "':'");
    c.antecedents.push_back(&expect(Token::ident, "an antecedent"));
    while (peek().kind == Token::comma) {
      next();
      c.antecedents.push_back(&expect(Token::ident, "an antecedent"));
    }
    expect(Token::arrow, "'->'");
    c.consequent = &expect(Token::ident, "a consequent");
    return c;
  }

  void check_clause(const Clause& c, bool assumptions_allowed) {
    if (symbols_.has_id(c.id->text)) semantic(*c.id, "duplicate id " + c.id->text);
    std::set<std::string> seen;
    for (const Token* a : c.antecedents) {
      if (is_false(*a)) semantic(*a, "FALSE cannot be an antecedent");
      if (!assumptions_allowed && symbols_.is_assumption(a->text))
        semantic(*a, "assumption " + a->text + " cannot appear in a rule");
      if (!seen.insert(a->text).second) semantic(*a, "repeated antecedent " + a->text);
    }
    if (symbols_.is_assumption(c.consequent->text))
      semantic(*c.consequent, "assumption " + c.consequent->text + " cannot be concluded");
    if (seen.count(c.consequent->text))
      semantic(*c.consequent, "consequent " + c.consequent->text + " is also an antecedent");
  }

  void record_clause(const Clause& c) {
    symbols_.add_id(c.id->text);
    for (const Token* a : c.antecedents)
      if (!symbols_.is_assumption(a->text)) symbols_.add_atom(a->text);
    if (!is_false(*c.consequent)) symbols_.add_atom(c.consequent->text);
  }

  std::string consequent_name(const Clause& c) const {
    return is_false(*c.consequent) ? kFalse : c.consequent->text;
  }

  RuleStmt parse_rule() {
    Clause c = parse_clause();
    expect_keyword("w");
    const Token& w = expect(Token::number, "a weight");
    expect_end();
    check_clause(c, false);
    double v = number(w);
    if (v < -1.0 || v > 1.0) semantic(w, "weight must lie in [-1,1]");
    if (v == 0.0) semantic(w, "weight must be nonzero");
    record_clause(c);
    RuleStmt r{c.id->text, {}, consequent_name(c), v};
    for (const Token* a : c.antecedents) r.antecedents.push_back(a->text);
    return r;
  }

  JustStmt parse_just() {
    Clause c = parse_clause();
    expect_keyword("c");
    const Token& ct = expect(Token::number, "a confidence");
    expect_keyword("cr");
    const Token& crt = expect(Token::number, "a confidence of resolution");
    expect_end();
    check_clause(c, true);
    double cv = number(ct), crv = number(crt);
    if (cv < -1.0 || cv > 1.0) semantic(ct, "confidence must lie in [-1,1]");
    if (crv < 0.0 || crv > 1.0) semantic(crt, "confidence of resolution must lie in [0,1]");
    record_clause(c);
    JustStmt j{c.id->text, {}, consequent_name(c), cv, crv};
    for (const Token* a : c.antecedents) j.antecedents.push_back(a->text);
    return j;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int line_;
  SymbolTable& symbols_;
  ParseOptions options_;
};

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

std::vector<std::string> env_names(const Engine& engine, const Environment& env) {
  std::vector<std::string> out;
  for (AssumptionId a : env.ids()) out.push_back(engine.name(a));
  return out;
}

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::assumption: return "assumption";
    case NodeKind::derived: return "derived";
    case NodeKind::falsity: return "falsity";
  }
  return "derived";
}

void write_entries(std::ostringstream& os, const Engine& engine,
                   const std::vector<LabelEntry>& entries, const char* indent) {
  os << "[";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const LabelEntry& e = entries[i];
    os << (i ? "," : "") << "\n" << indent << "  {\"env\": [";
    auto names = env_names(engine, e.env);
    for (std::size_t k = 0; k < names.size(); ++k) os << (k ? ", " : "") << quote(names[k]);
    os << "], \"c\": " << format_fixed(e.c.value()) << ", \"cr\": " << format_fixed(e.cr.value())
       << ", \"crc\": " << format_fixed(e.crc) << ", \"cs\": " << format_fixed(e.cs) << "}";
  }
  if (!entries.empty()) os << "\n" << indent;
  os << "]";
}

}  // namespace

bool operator==(const NetworkFile& a, const NetworkFile& b) {
  return std::equal(a.statements.begin(), a.statements.end(), b.statements.begin(),
                    b.statements.end(),
                    [](const Statement& x, const Statement& y) { return x.body == y.body; });
}

ParseError::ParseError(ErrorKind kind, SourcePos pos, const std::string& message)
    : std::runtime_error("line " + std::to_string(pos.line) + ", column " +
                         std::to_string(pos.column) + ": " + message),
      kind_(kind),
      pos_(pos),
      message_(message) {}

std::optional<Statement> parse_statement(std::string_view line, int line_no,
                                         SymbolTable& symbols, ParseOptions options) {
  std::vector<Token> tokens = tokenize(line, line_no);
  if (tokens.size() == 1) return std::nullopt;
  // Validate against a scratch copy so a failing statement leaves no trace.
  SymbolTable scratch = symbols;
  Statement s = StatementParser(std::move(tokens), line_no, scratch, options).parse();
  symbols = std::move(scratch);
  return s;
}

NetworkFile parse(std::string_view text, ParseOptions options) {
  NetworkFile file;
  SymbolTable symbols;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    if (auto s = parse_statement(text.substr(start, end - start), line_no, symbols, options))
      file.statements.push_back(std::move(*s));
    start = end + 1;
  }
  return file;
}

std::string format_decimal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  std::string out(buf, ec == std::errc() ? ptr : buf);
  if (out == "-0") out = "0";
  return out;
}

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  std::string out(buf);
  if (out == "-0.000000000") out = "0.000000000";
  return out;
}

std::string serialize_statement(const StatementBody& body) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AssumeStmt>) {
          return "assume " + s.name;
        } else if constexpr (std::is_same_v<T, FactStmt>) {
          return "fact " + s.atom + " from " + s.source + " tv " + format_decimal(s.tv);
        } else if constexpr (std::is_same_v<T, RuleStmt>) {
          return "rule " + s.id + ": " + join(s.antecedents, ", ") + " -> " + s.consequent +
                 " w " + format_decimal(s.weight);
        } else {
          return "just " + s.id + ": " + join(s.antecedents, ", ") + " -> " + s.consequent +
                 " c " + format_decimal(s.c) + " cr " + format_decimal(s.cr);
        }
      },
      body);
}

std::string serialize_network(const NetworkFile& file) {
  std::string out;
  for (const Statement& s : file.statements) out += serialize_statement(s.body) + "\n";
  return out;
}

std::string format_env(const Engine& engine, const Environment& env) {
  return "(" + join(env_names(engine, env), ", ") + ")";
}

std::string serialize_state(const Engine& engine) {
  std::ostringstream os;
  Thresholds t = engine.thresholds();
  os << "{\n  \"thresholds\": {\"alpha\": " << format_fixed(t.alpha)
     << ", \"beta\": " << format_fixed(t.beta) << "},\n";

  os << "  \"nodes\": [";
  bool first = true;
  for (NodeId n : engine.nodes()) {
    if (n == engine.falsity()) continue;
    os << (first ? "" : ",") << "\n    {\"name\": " << quote(engine.name(n))
       << ", \"kind\": \"" << kind_name(engine.kind(n)) << "\", \"label\": ";
    write_entries(os, engine, engine.label(n), "    ");
    os << "}";
    first = false;
  }
  if (!first) os << "\n  ";
  os << "],\n";

  os << "  \"falsity\": ";
  write_entries(os, engine, engine.label(engine.falsity()), "  ");
  os << ",\n";

  os << "  \"medb\": [";
  const auto& medb = engine.medb();
  for (std::size_t i = 0; i < medb.size(); ++i) {
    os << (i ? "," : "") << "\n    {\"env\": [";
    auto names = env_names(engine, medb[i].env);
    for (std::size_t k = 0; k < names.size(); ++k) os << (k ? ", " : "") << quote(names[k]);
    os << "], \"cs\": " << format_fixed(medb[i].cs) << "}";
  }
  if (!medb.empty()) os << "\n  ";
  os << "]\n}\n";
  return os.str();
}

std::string format_table(const Engine& engine) {
  std::ostringstream os;
  Thresholds t = engine.thresholds();
  os << "thresholds alpha=" << format_fixed(t.alpha) << " beta=" << format_fixed(t.beta) << "\n";
  for (NodeId n : engine.nodes()) {
    if (n == engine.falsity() && engine.label(n).empty()) continue;
    os << engine.name(n) << " [" << kind_name(engine.kind(n)) << "]\n";
    for (const LabelEntry& e : engine.label(n))
      os << "  " << format_env(engine, e.env) << "  c=" << format_fixed(e.c.value())
         << " cr=" << format_fixed(e.cr.value()) << " crc=" << format_fixed(e.crc)
         << " cs=" << format_fixed(e.cs) << "\n";
  }
  os << "MEDB\n";
  for (const NogoodRecord& r : engine.medb())
    os << "  " << format_env(engine, r.env) << "  cs=" << format_fixed(r.cs) << "\n";
  return os.str();
}

std::string export_dot(const Engine& engine) {
  std::vector<JustificationId> active = engine.justifications();
  bool falsity_used = std::any_of(active.begin(), active.end(), [&](JustificationId j) {
    return engine.justification(j).consequent == engine.falsity();
  });

  auto vertex = [&](NodeId n) { return quote("n:" + engine.name(n)); };
  std::ostringstream os;
  os << "digraph ftms {\n";
  for (NodeId n : engine.nodes()) {
    switch (engine.kind(n)) {
      case NodeKind::falsity:
        if (falsity_used)
          os << "  " << vertex(n)
             << " [label=\"\xE2\x8A\xA5\", shape=doubleoctagon, color=red, fontcolor=red];\n";
        break;
      case NodeKind::assumption:
        os << "  " << vertex(n) << " [label=" << quote(engine.name(n)) << ", shape=box];\n";
        break;
      case NodeKind::derived:
        os << "  " << vertex(n) << " [label=" << quote(engine.name(n)) << ", shape=ellipse];\n";
        break;
    }
  }
  for (JustificationId id : active) {
    const Justification& j = engine.justification(id);
    os << "  " << quote("j:" + j.name) << " [label=" << quote(j.name) << ", shape=diamond];\n";
  }
  for (JustificationId id : active) {
    const Justification& j = engine.justification(id);
    std::string jv = quote("j:" + j.name);
    for (NodeId a : j.antecedents) os << "  " << vertex(a) << " -> " << jv << ";\n";
    os << "  " << jv << " -> " << vertex(j.consequent);
    if (j.consequent == engine.falsity()) os << " [color=red]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ftms::netfmt
