#include "wsn/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace wsn {

namespace {

constexpr std::size_t kWrapColumn = 240;

void append_term(std::string& out, std::size_t& line_start, double coef, const std::string& name) {
  std::string piece = coef < 0.0 ? " - " + format_double(-coef) : " + " + format_double(coef);
  piece += ' ';
  piece += name;
  if (out.size() - line_start + piece.size() > kWrapColumn) {
    out += "\n  ";
    line_start = out.size() - 2;
  }
  out += piece;
}

std::string bound_text(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return format_double(v);
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string export_lp(const IlpModel& model) {
  const auto& vars = model.variables();
  std::vector<std::string> names;
  names.reserve(vars.size());
  for (const Variable& v : vars) names.push_back(var_name(v.ref));

  std::string out = "\\ wsn-ilp\nMinimize\n obj:";
  std::size_t line_start = out.rfind('\n') + 1;
  for (const Term& t : model.objective()) append_term(out, line_start, t.coef, names[t.var]);
  out += "\nSubject To\n";
  for (const LinearConstraint& c : model.constraints()) {
    line_start = out.size();
    out += ' ';
    out += tag_name(c.tag);
    out += ':';
    for (const Term& t : c.terms) append_term(out, line_start, t.coef, names[t.var]);
    std::string tail = " ";
    tail += sense_symbol(c.sense);
    tail += ' ';
    tail += format_double(c.rhs);
    if (out.size() - line_start + tail.size() > kWrapColumn) out += "\n  ";
    out += tail;
    out += '\n';
  }
  out += "Bounds\n";
  for (std::size_t k = 0; k < vars.size(); ++k) {
    out += ' ';
    out += bound_text(vars[k].lower);
    out += " <= ";
    out += names[k];
    out += " <= ";
    out += bound_text(vars[k].upper);
    out += '\n';
  }
  auto is_binary = [](const Variable& v) { return v.integer && v.lower == 0.0 && v.upper == 1.0; };
  out += "Binaries\n";
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (is_binary(vars[k])) out += ' ' + names[k] + '\n';
  }
  const bool has_general = std::any_of(vars.begin(), vars.end(), [&](const Variable& v) {
    return v.integer && !is_binary(v);
  });
  if (has_general) {
    out += "Generals\n";
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (vars[k].integer && !is_binary(vars[k])) out += ' ' + names[k] + '\n';
    }
  }
  out += "End\n";
  return out;
}

LpParseError::LpParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { kIdent, kNumber, kSense, kColon, kPlus, kMinus, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double number = 0.0;
  Sense sense = Sense::kLe;
  int line = 0;
  int column = 0;
  bool line_start = false;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' ||
         c == ']' || c == '#' || c == '$' || c == '&' || c == '~' || c == '\'' || c == '"' ||
         c == '{' || c == '}';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> toks;
  int line = 1;
  std::size_t line_begin = 0;
  bool at_line_start = true;
  std::size_t p = 0;
  auto here = [&](std::size_t pos) { return static_cast<int>(pos - line_begin) + 1; };
  while (p < text.size()) {
    const char c = text[p];
    if (c == '\n') {
      ++line;
      line_begin = ++p;
      at_line_start = true;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++p;
      continue;
    }
    if (c == '\\') {
      while (p < text.size() && text[p] != '\n') ++p;
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = here(p);
    tok.line_start = at_line_start;
    at_line_start = false;
    if (ident_start(c)) {
      const std::size_t b = p;
      while (p < text.size() && ident_char(text[p])) ++p;
      tok.kind = Tok::kIdent;
      tok.text = std::string(text.substr(b, p - b));
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t b = p;
      while (p < text.size() && (std::isdigit(static_cast<unsigned char>(text[p])) || text[p] == '.')) ++p;
      if (p + 1 < text.size() && (text[p] == 'e' || text[p] == 'E')) {
        std::size_t q = p + 1;
        if (q < text.size() && (text[q] == '+' || text[q] == '-')) ++q;
        if (q < text.size() && std::isdigit(static_cast<unsigned char>(text[q]))) {
          p = q;
          while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
        }
      }
      tok.kind = Tok::kNumber;
      tok.text = std::string(text.substr(b, p - b));
      const auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
      if (res.ec != std::errc() || res.ptr != tok.text.data() + tok.text.size()) {
        throw LpParseError(tok.line, tok.column, "malformed number '" + tok.text + "'");
      }
    } else if (c == '<' || c == '>' || c == '=' || c == '!') {
      const std::size_t b = p;
      while (p < text.size() && (text[p] == '<' || text[p] == '>' || text[p] == '=' || text[p] == '!')) ++p;
      tok.kind = Tok::kSense;
      tok.text = std::string(text.substr(b, p - b));
      if (tok.text == "<=" || tok.text == "=<" || tok.text == "<") {
        tok.sense = Sense::kLe;
      } else if (tok.text == ">=" || tok.text == "=>" || tok.text == ">") {
        tok.sense = Sense::kGe;
      } else if (tok.text == "=") {
        tok.sense = Sense::kEq;
      } else {
        throw LpParseError(tok.line, tok.column, "malformed sense symbol '" + tok.text + "'");
      }
    } else if (c == ':') {
      tok.kind = Tok::kColon;
      tok.text = ":";
      ++p;
    } else if (c == '+' || c == '-') {
      tok.kind = c == '+' ? Tok::kPlus : Tok::kMinus;
      tok.text = std::string(1, c);
      ++p;
    } else {
      throw LpParseError(tok.line, tok.column, std::string("unexpected character '") + c + "'");
    }
    toks.push_back(std::move(tok));
  }
  Token end;
  end.kind = Tok::kEnd;
  end.line = line;
  end.column = here(p);
  end.line_start = true;
  toks.push_back(end);
  return toks;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

enum class Section { kNone, kObjective, kConstraints, kBounds, kBinaries, kGenerals, kEnd };

struct RawTerm {
  std::string var;
  double coef;
};

struct RawRow {
  std::string name;
  std::vector<RawTerm> terms;
  Sense sense;
  double rhs;
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  IlpModel parse() {
    Section section = Section::kNone;
    bool seen_objective = false;
    while (peek().kind != Tok::kEnd) {
      if (auto s = section_keyword()) {
        section = *s;
        if (section == Section::kEnd) break;
        if (section == Section::kObjective) {
          if (seen_objective) error(prev(), "second objective section");
          seen_objective = true;
          parse_objective();
        }
        continue;
      }
      switch (section) {
        case Section::kConstraints: parse_row(); break;
        case Section::kBounds: parse_bound(); break;
        case Section::kBinaries:
        case Section::kGenerals: parse_integer_decl(section == Section::kBinaries); break;
        default: error(peek(), "expected a section keyword, found '" + peek().text + "'");
      }
    }
    if (!seen_objective) error(peek(), "missing Minimize section");
    return assemble();
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] static void error(const Token& t, const std::string& what) {
    throw LpParseError(t.line, t.column, what);
  }

  bool at_keyword() const { return peek().kind == Tok::kEnd || peek_section().has_value(); }

  std::optional<Section> peek_section() const {
    const Token& t = peek();
    if (t.kind != Tok::kIdent || !t.line_start) return std::nullopt;
    const std::string w = lower(t.text);
    if (w == "minimize" || w == "minimise" || w == "min") return Section::kObjective;
    if (w == "maximize" || w == "maximise" || w == "max") return Section::kObjective;
    if (w == "subject" && peek(1).kind == Tok::kIdent && lower(peek(1).text) == "to") {
      return Section::kConstraints;
    }
    if (w == "st" || w == "s.t.") return Section::kConstraints;
    if (w == "bounds" || w == "bound") return Section::kBounds;
    if (w == "binaries" || w == "binary" || w == "bin") return Section::kBinaries;
    if (w == "generals" || w == "general" || w == "gen") return Section::kGenerals;
    if (w == "end") return Section::kEnd;
    return std::nullopt;
  }

  std::optional<Section> section_keyword() {
    auto s = peek_section();
    if (!s) return std::nullopt;
    const Token& t = next();
    const std::string w = lower(t.text);
    if (w.rfind("max", 0) == 0) error(t, "only minimization models are supported");
    if (w == "subject") next();
    return s;
  }

  // Reads "[sign] [coef] name" repeatedly until a sense symbol or keyword.
  std::vector<RawTerm> parse_terms() {
    std::vector<RawTerm> terms;
    bool first = true;
    while (!at_keyword() && peek().kind != Tok::kSense) {
      double sign = 1.0;
      if (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
        sign = next().kind == Tok::kMinus ? -1.0 : 1.0;
      } else if (!first) {
        error(peek(), "expected '+' or '-' between terms, found '" + peek().text + "'");
      }
      double coef = 1.0;
      if (peek().kind == Tok::kNumber) coef = next().number;
      if (peek().kind != Tok::kIdent || at_keyword()) {
        error(peek(), "expected a variable name, found '" + peek().text + "'");
      }
      const Token& v = next();
      note_variable(v);
      terms.push_back({v.text, sign * coef});
      first = false;
    }
    return terms;
  }

  void parse_objective() {
    if (peek().kind == Tok::kIdent && peek(1).kind == Tok::kColon && !at_keyword()) {
      next();
      next();
    }
    objective_ = parse_terms();
  }

  double parse_signed_number() {
    double sign = 1.0;
    if (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) sign = next().kind == Tok::kMinus ? -1.0 : 1.0;
    const Token& t = next();
    if (t.kind == Tok::kNumber) return sign * t.number;
    if (t.kind == Tok::kIdent) {
      const std::string w = lower(t.text);
      if (w == "inf" || w == "infinity") return sign * std::numeric_limits<double>::infinity();
    }
    error(t, "expected a number, found '" + t.text + "'");
  }

  void parse_row() {
    const Token& name = next();
    if (name.kind != Tok::kIdent || peek().kind != Tok::kColon) {
      error(name, "expected 'name:' at the start of a constraint");
    }
    next();
    RawRow row;
    row.name = name.text;
    row.line = name.line;
    row.column = name.column;
    row.terms = parse_terms();
    const Token& s = next();
    if (s.kind != Tok::kSense) error(s, "expected a sense symbol, found '" + s.text + "'");
    row.sense = s.sense;
    row.rhs = parse_signed_number();
    rows_.push_back(std::move(row));
  }

  void parse_bound() {
    // lo <= v [<= hi] | v <= hi | v >= lo | v = val | v free
    if (peek().kind == Tok::kIdent && lower(peek().text) != "inf" && lower(peek().text) != "infinity") {
      const Token& v = next();
      note_variable(v);
      auto& b = bounds_[v.text];
      declare_order(v.text);
      if (peek().kind == Tok::kIdent && lower(peek().text) == "free") {
        next();
        b.lower = -std::numeric_limits<double>::infinity();
        b.upper = std::numeric_limits<double>::infinity();
        return;
      }
      const Token& s = next();
      if (s.kind != Tok::kSense) error(s, "expected a bound relation, found '" + s.text + "'");
      const double val = parse_signed_number();
      if (s.sense == Sense::kLe) b.upper = val;
      else if (s.sense == Sense::kGe) b.lower = val;
      else b.lower = b.upper = val;
      return;
    }
    const double lo = parse_signed_number();
    const Token& s1 = next();
    if (s1.kind != Tok::kSense || s1.sense != Sense::kLe) error(s1, "expected '<=' after a lower bound");
    const Token& v = next();
    if (v.kind != Tok::kIdent) error(v, "expected a variable name in bound");
    note_variable(v);
    declare_order(v.text);
    auto& b = bounds_[v.text];
    b.lower = lo;
    if (peek().kind == Tok::kSense) {
      const Token& s2 = next();
      if (s2.sense != Sense::kLe) error(s2, "expected '<=' before an upper bound");
      b.upper = parse_signed_number();
    }
  }

  void parse_integer_decl(bool binary) {
    const Token& v = next();
    if (v.kind != Tok::kIdent) error(v, "expected a variable name, found '" + v.text + "'");
    note_variable(v);
    (binary ? binaries_ : generals_).insert(v.text);
  }

  void note_variable(const Token& v) {
    if (seen_.count(v.text)) return;
    if (!parse_var_name(v.text)) error(v, "unrecognized variable name '" + v.text + "'");
    seen_.insert(v.text);
    appearance_.push_back(v.text);
  }

  void declare_order(const std::string& name) {
    if (declared_set_.insert(name).second) declared_.push_back(name);
  }

  IlpModel assemble() {
    IlpModel model;
    std::unordered_map<std::string, int> col;
    auto add = [&](const std::string& name) {
      const VarRef ref = *parse_var_name(name);
      double lo = 0.0;
      double hi = std::numeric_limits<double>::infinity();
      bool integer = false;
      if (binaries_.count(name)) {
        integer = true;
        hi = 1.0;
      }
      if (generals_.count(name)) integer = true;
      if (auto it = bounds_.find(name); it != bounds_.end()) {
        if (it->second.lower) lo = *it->second.lower;
        if (it->second.upper) hi = *it->second.upper;
      }
      col[name] = model.add_variable(ref, lo, hi, integer);
    };
    for (const auto& name : declared_) add(name);
    for (const auto& name : appearance_) {
      if (!declared_set_.count(name)) add(name);
    }
    auto terms_of = [&](const std::vector<RawTerm>& raw) {
      std::vector<Term> terms;
      terms.reserve(raw.size());
      for (const RawTerm& t : raw) terms.push_back({col.at(t.var), t.coef});
      return terms;
    };
    for (const RawRow& row : rows_) {
      const auto tag = parse_tag_name(row.name);
      if (!tag) throw LpParseError(row.line, row.column, "unrecognized constraint name '" + row.name + "'");
      model.add_constraint(terms_of(row.terms), row.sense, row.rhs, *tag);
    }
    model.set_objective(terms_of(objective_));
    return model;
  }

  struct Bound {
    std::optional<double> lower;
    std::optional<double> upper;
  };

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<RawTerm> objective_;
  std::vector<RawRow> rows_;
  std::unordered_map<std::string, Bound> bounds_;
  std::unordered_set<std::string> binaries_;
  std::unordered_set<std::string> generals_;
  std::unordered_set<std::string> seen_;
  std::vector<std::string> appearance_;
  std::unordered_set<std::string> declared_set_;
  std::vector<std::string> declared_;
};

}  // namespace

IlpModel parse_lp(std::string_view text) { return Parser(text).parse(); }

}  // namespace wsn
