#include "syllo/surface.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace syllo {

ParseError::ParseError(int line_, int column_, std::string expected_, std::string found_)
    : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) +
                         ": expected " + expected_ + ", found " + found_),
      line(line_),
      column(column_),
      expected(std::move(expected_)),
      found(std::move(found_)) {}

FragmentMismatch::FragmentMismatch(const Formula &phi, Fragment frag, int line_)
    : std::runtime_error("line " + std::to_string(line_) + ": " + print_formula(phi) +
                         " is not in fragment " + fragment_name(frag)),
      formula(phi),
      fragment(frag),
      line(line_) {}

void AtomTable::note(const std::string &name, bool binary, int line, int column) {
  auto [it, fresh] = kinds_.emplace(name, binary);
  if (!fresh && it->second != binary)
    throw ParseError(line, column, binary ? "binary atom" : "unary atom",
                     "'" + name + "' already used as " + (it->second ? "binary" : "unary"));
}

namespace {

struct Lexer {
  const std::string &src;
  AtomTable &table;
  size_t pos = 0;
  int line;
  int col = 1;

  Lexer(const std::string &s, AtomTable &t, int l) : src(s), table(t), line(l) {}

  void skip() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  std::string peek_text() {
    skip();
    if (pos >= src.size()) return "end of input";
    size_t e = pos;
    if (is_ident_start(src[e])) {
      while (e < src.size() && is_ident_char(src[e])) ++e;
    } else {
      ++e;
    }
    return "'" + src.substr(pos, e - pos) + "'";
  }
  static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }
  [[noreturn]] void fail(const std::string &expected) {
    std::string found = peek_text();
    throw ParseError(line, col, expected, found);
  }
  void expect(char c) {
    skip();
    if (pos >= src.size() || src[pos] != c) fail(std::string("\"") + c + "\"");
    advance();
  }
  bool accept(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) {
      advance();
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    if (pos >= src.size() || !is_ident_start(src[pos])) fail("identifier");
    size_t s = pos;
    while (pos < src.size() && is_ident_char(src[pos])) advance();
    return src.substr(s, pos - s);
  }
  // quantifier keyword directly followed by "("
  std::optional<Quantifier> quantifier_ahead() {
    skip();
    size_t e = pos;
    while (e < src.size() && is_ident_char(src[e])) ++e;
    std::string w = src.substr(pos, e - pos);
    if (w != "all" && w != "some") return std::nullopt;
    size_t k = e;
    while (k < src.size() && (src[k] == ' ' || src[k] == '\t')) ++k;
    if (k >= src.size() || src[k] != '(') return std::nullopt;
    return w == "all" ? Quantifier::All : Quantifier::Some;
  }

  UnaryLiteral ulit() {
    bool neg = accept('~');
    skip();
    int l = line, c = col;
    std::string name = ident();
    table.note(name, false, l, c);
    return {name, !neg};
  }
  BinaryLiteral bl() {
    bool neg = accept('~');
    skip();
    int l = line, c = col;
    std::string name = ident();
    table.note(name, true, l, c);
    return {name, !neg};
  }
  ETerm term() {
    skip();
    if (auto q = quantifier_ahead()) {
      ident();
      expect('(');
      UnaryLiteral s = ulit();
      expect(',');
      BinaryLiteral v = bl();
      expect(')');
      return *q == Quantifier::All ? all(s, v) : ex(s, v);
    }
    if (pos < src.size() && src[pos] != '~' && !is_ident_start(src[pos])) fail("term");
    if (pos >= src.size()) fail("term");
    return lit(ulit());
  }
  Formula formula() {
    skip();
    auto q = quantifier_ahead();
    if (!q) fail("\"all\" or \"some\"");
    ident();
    expect('(');
    ETerm a = term();
    expect(',');
    ETerm b = term();
    expect(')');
    return Formula{*q, a, b};
  }
  void end() {
    skip();
    if (pos < src.size()) fail("end of input");
  }
};

}  // namespace

Formula parse_formula(const std::string &text) {
  AtomTable t;
  return parse_formula(text, t);
}

Formula parse_formula(const std::string &text, AtomTable &table, int line) {
  Lexer lx(text, table, line);
  Formula f = lx.formula();
  lx.end();
  return f;
}

ETerm parse_term(const std::string &text, AtomTable &table, int line) {
  Lexer lx(text, table, line);
  ETerm e = lx.term();
  lx.end();
  return e;
}

BinaryLiteral parse_binary_literal(const std::string &text, AtomTable &table, int line) {
  Lexer lx(text, table, line);
  BinaryLiteral b = lx.bl();
  lx.end();
  return b;
}

std::string print_literal(const UnaryLiteral &l) { return (l.positive ? "" : "~") + l.atom; }
std::string print_literal(const BinaryLiteral &t) { return (t.positive ? "" : "~") + t.atom; }

std::string print_term(const ETerm &e) {
  switch (e.kind) {
    case TermKind::Literal: return print_literal(e.subject);
    case TermKind::Exists: return "some(" + print_literal(e.subject) + ", " + print_literal(e.verb) + ")";
    case TermKind::Forall: return "all(" + print_literal(e.subject) + ", " + print_literal(e.verb) + ")";
  }
  return {};
}

std::string print_formula(const Formula &phi) {
  return std::string(phi.quantifier == Quantifier::All ? "all(" : "some(") + print_term(phi.left) + ", " +
         print_term(phi.right) + ")";
}

// ---- gloss

namespace {

std::string noun(const UnaryLiteral &l) { return l.positive ? l.atom : "non-" + l.atom; }

std::string indef(const std::string &n) {
  char c = n.empty() ? 'x' : static_cast<char>(std::tolower(static_cast<unsigned char>(n[0])));
  bool vowel = c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  return (vowel ? "an " : "a ") + n;
}

std::string verb3(const BinaryLiteral &t) { return t.atom + "s"; }

// verb phrase of an e-term; `rel` selects the indefinite article used in relative clauses
std::string vp(const ETerm &e, bool rel) {
  const std::string obj = noun(e.subject);
  switch (e.kind) {
    case TermKind::Literal:
      return e.subject.positive ? "is " + indef(e.subject.atom) : "is not " + indef(e.subject.atom);
    case TermKind::Exists:
      if (e.verb.positive) return verb3(e.verb) + " " + (rel ? indef(obj) : "some " + obj);
      return "does not " + e.verb.atom + " every " + obj;
    case TermKind::Forall:
      if (e.verb.positive) return verb3(e.verb) + " every " + obj;
      return verb3(e.verb) + " no " + obj;
  }
  return {};
}

// the negative forms read with a leading "No"
bool negative_pred(const ETerm &e) { return e.is_literal() ? !e.subject.positive : !e.verb.positive; }

std::string gloss_literal_subject(const Formula &f) {
  const std::string subj = noun(f.left.subject);
  const ETerm &e = f.right;
  if (f.quantifier == Quantifier::Some) return "Some " + subj + " " + vp(e, false);
  if (!negative_pred(e)) return "Every " + subj + " " + vp(e, false);
  ETerm pos = complement(e);
  if (pos.is_literal()) return "No " + subj + " is " + indef(pos.subject.atom);
  const std::string obj = noun(pos.subject);
  if (pos.kind == TermKind::Exists) return "No " + subj + " " + verb3(pos.verb) + " any " + obj;
  return "No " + subj + " " + verb3(pos.verb) + " every " + obj;
}

}  // namespace

std::string gloss_term(const ETerm &e) {
  if (e.is_literal()) return noun(e.subject);
  return "thing which " + vp(e, false);
}

std::string gloss(const Formula &phi) {
  Formula c = canonicalize(phi);
  auto reps = representatives(c);
  const Formula *pick = nullptr;
  for (const auto &r : reps)
    if (r.left.is_literal() && r.left.subject.positive) {
      pick = &r;
      break;
    }
  if (!pick)
    for (const auto &r : reps)
      if (r.left.is_literal()) {
        pick = &r;
        break;
      }
  if (pick) return gloss_literal_subject(*pick);
  const char *head = c.quantifier == Quantifier::All ? "Everything which " : "Something which ";
  return head + vp(c.left, true) + " " + vp(c.right, true);
}

// ---- sequents

SequentFile parse_sequent(const std::string &text) {
  SequentFile out;
  AtomTable table;
  std::set<Formula> seen;
  std::vector<std::pair<Formula, int>> all_lines;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string s = raw;
    if (auto h = s.find('#'); h != std::string::npos) s = s.substr(0, h);
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    s = s.substr(b);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    int col0 = static_cast<int>(b) + 1;
    if (s.rfind("fragment:", 0) == 0) {
      std::string tag = s.substr(9);
      size_t tb = tag.find_first_not_of(" \t");
      tag = tb == std::string::npos ? "" : tag.substr(tb);
      auto fr = parse_fragment(tag);
      if (!fr) throw ParseError(lineno, col0 + 9, "fragment tag (S, Sd, R, Rd, Rs, Rsd)", "'" + tag + "'");
      if (out.declared_fragment) throw ParseError(lineno, col0, "formula", "second fragment header");
      out.declared_fragment = fr;
      continue;
    }
    if (s.rfind("|-", 0) == 0) {
      if (out.conclusion) throw ParseError(lineno, col0, "formula", "second conclusion line");
      Formula f = parse_formula(std::string(col0 + 1, ' ') + s.substr(2), table, lineno);
      out.conclusion = f;
      all_lines.push_back({f, lineno});
      continue;
    }
    Formula f = parse_formula(std::string(col0 - 1, ' ') + s, table, lineno);
    all_lines.push_back({f, lineno});
    if (seen.insert(canonicalize(f)).second) out.premises.push_back(f);
  }
  if (out.declared_fragment)
    for (const auto &[f, ln] : all_lines)
      if (!in_fragment(f, *out.declared_fragment)) throw FragmentMismatch(f, *out.declared_fragment, ln);
  return out;
}

std::string print_sequent(const SequentFile &seq) {
  std::string out;
  if (seq.declared_fragment) out += "fragment: " + fragment_name(*seq.declared_fragment) + "\n";
  for (const auto &p : seq.premises) out += print_formula(p) + "\n";
  if (seq.conclusion) out += "|- " + print_formula(*seq.conclusion) + "\n";
  return out;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace syllo
