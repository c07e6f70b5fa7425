#include "syllo/semantics.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "syllo/surface.hpp"

namespace syllo {

Structure::Structure(std::vector<std::string> domain) : domain_(std::move(domain)) {
  if (domain_.empty()) throw std::invalid_argument("structure domain must be non-empty");
  for (size_t i = 0; i < domain_.size(); ++i)
    if (!index_.emplace(domain_[i], static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate element " + domain_[i]);
}

int Structure::index(const std::string &name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

void Structure::declare_unary(const std::string &p) {
  if (binary_.count(p)) throw NamespaceError("atom '" + p + "' is binary");
  unary_.try_emplace(p, ElemSet(size(), false));
}

void Structure::declare_binary(const std::string &r) {
  if (unary_.count(r)) throw NamespaceError("atom '" + r + "' is unary");
  binary_.try_emplace(r, std::vector<ElemSet>(size(), ElemSet(size(), false)));
}

void Structure::add_unary(const std::string &p, int i) {
  declare_unary(p);
  if (i < 0 || static_cast<size_t>(i) >= size()) throw std::out_of_range("element index");
  unary_[p][i] = true;
}

void Structure::add_unary(const std::string &p, const std::string &elem) {
  int i = index(elem);
  if (i < 0) throw std::invalid_argument("unknown element " + elem);
  add_unary(p, i);
}

void Structure::add_binary(const std::string &r, int i, int j) {
  declare_binary(r);
  if (i < 0 || j < 0 || static_cast<size_t>(i) >= size() || static_cast<size_t>(j) >= size())
    throw std::out_of_range("element index");
  binary_[r][i][j] = true;
}

void Structure::add_binary(const std::string &r, const std::string &a, const std::string &b) {
  int i = index(a), j = index(b);
  if (i < 0) throw std::invalid_argument("unknown element " + a);
  if (j < 0) throw std::invalid_argument("unknown element " + b);
  add_binary(r, i, j);
}

bool Structure::in_unary(const std::string &p, int i) const {
  auto it = unary_.find(p);
  return it != unary_.end() && it->second[i];
}

bool Structure::related(const std::string &r, int i, int j) const {
  auto it = binary_.find(r);
  return it != binary_.end() && it->second[i][j];
}

Signature Structure::signature() const {
  Signature s;
  for (const auto &[k, v] : unary_) s.unaries.insert(k);
  for (const auto &[k, v] : binary_) s.binaries.insert(k);
  return s;
}

bool Structure::operator==(const Structure &o) const {
  return domain_ == o.domain_ && unary_ == o.unary_ && binary_ == o.binary_;
}

bool in_extension(const Structure &A, const ETerm &e, int i) {
  auto lit_holds = [&](const UnaryLiteral &l, int k) { return A.in_unary(l.atom, k) == l.positive; };
  if (e.is_literal()) return lit_holds(e.subject, i);
  const int n = static_cast<int>(A.size());
  for (int j = 0; j < n; ++j) {
    if (!lit_holds(e.subject, j)) continue;
    bool edge = A.related(e.verb.atom, i, j) == e.verb.positive;
    if (e.kind == TermKind::Exists && edge) return true;
    if (e.kind == TermKind::Forall && !edge) return false;
  }
  return e.kind == TermKind::Forall;
}

ElemSet extension(const Structure &A, const ETerm &e) {
  ElemSet out(A.size());
  for (size_t i = 0; i < A.size(); ++i) out[i] = in_extension(A, e, static_cast<int>(i));
  return out;
}

TruthVerdict satisfies(const Structure &A, const Formula &phi) {
  ElemSet a = extension(A, phi.left), b = extension(A, phi.right);
  for (size_t i = 0; i < A.size(); ++i) {
    if (phi.quantifier == Quantifier::Some && a[i] && b[i]) return {true, static_cast<int>(i)};
    if (phi.quantifier == Quantifier::All && a[i] && !b[i]) return {false, static_cast<int>(i)};
  }
  return {phi.quantifier == Quantifier::All, std::nullopt};
}

bool models(const Structure &A, const std::vector<Formula> &phis) {
  for (const auto &f : phis)
    if (!satisfies(A, f).holds) return false;
  return true;
}

std::vector<Formula> theory(const Structure &A, Fragment f, const Signature &sig) {
  auto terms = all_eterms(sig);
  std::map<ETerm, ElemSet> ext;
  for (const auto &e : terms) ext.emplace(e, extension(A, e));
  std::vector<Formula> out;
  for (const auto &phi : all_formulas(sig, f)) {
    const ElemSet &a = ext.at(phi.left), &b = ext.at(phi.right);
    bool holds = phi.quantifier == Quantifier::All;
    for (size_t i = 0; i < A.size(); ++i) {
      if (phi.quantifier == Quantifier::Some && a[i] && b[i]) {
        holds = true;
        break;
      }
      if (phi.quantifier == Quantifier::All && a[i] && !b[i]) {
        holds = false;
        break;
      }
    }
    if (holds) out.push_back(phi);
  }
  return out;
}

Structure disjoint_union(const Structure &A, const Structure &B, const std::string &pa, const std::string &pb) {
  std::vector<std::string> dom;
  for (const auto &x : A.domain()) dom.push_back(pa + x);
  for (const auto &x : B.domain()) dom.push_back(pb + x);
  Structure U(dom);
  const int off = static_cast<int>(A.size());
  auto copy = [&](const Structure &S, int base) {
    for (const auto &[p, ext] : S.unary_map()) {
      U.declare_unary(p);
      for (size_t i = 0; i < ext.size(); ++i)
        if (ext[i]) U.add_unary(p, base + static_cast<int>(i));
    }
    for (const auto &[r, rows] : S.binary_map()) {
      U.declare_binary(r);
      for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.size(); ++j)
          if (rows[i][j]) U.add_binary(r, base + static_cast<int>(i), base + static_cast<int>(j));
    }
  };
  copy(A, 0);
  copy(B, off);
  return U;
}

OracleVerdict oracle_valid(const std::vector<Formula> &theta, const Formula &goal, int max_size) {
  std::vector<Formula> t = theta;
  t.push_back(bar(goal));
  ModelSearch m = find_model(t, max_size);
  OracleVerdict v;
  v.bound = max_size;
  v.valid_within_bound = !m.found();
  if (m.found()) {
    if (satisfies(*m.model, goal).holds) throw std::logic_error("oracle_valid: countermodel satisfies goal");
    v.countermodel = std::move(m.model);
  }
  return v;
}

// ---- naive oracle

ModelSearch brute_force_model(const std::vector<Formula> &theta, int max_size) {
  Signature sig = atoms(theta);
  std::vector<std::string> un(sig.unaries.begin(), sig.unaries.end());
  std::vector<std::string> bi(sig.binaries.begin(), sig.binaries.end());
  for (int n = 1; n <= max_size; ++n) {
    const size_t ubits = un.size() * n, bbits = bi.size() * n * n;
    if (ubits + bbits > 24) throw std::invalid_argument("brute_force_model: search space too large");
    const unsigned long long total = 1ull << (ubits + bbits);
    std::vector<std::string> dom;
    for (int i = 0; i < n; ++i) dom.push_back("e" + std::to_string(i + 1));
    for (unsigned long long code = 0; code < total; ++code) {
      Structure A(dom);
      size_t bit = 0;
      for (const auto &p : un) {
        A.declare_unary(p);
        for (int i = 0; i < n; ++i, ++bit)
          if (code >> bit & 1) A.add_unary(p, i);
      }
      for (const auto &r : bi) {
        A.declare_binary(r);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j, ++bit)
            if (code >> bit & 1) A.add_binary(r, i, j);
      }
      if (models(A, theta)) return {A, max_size};
    }
  }
  return {std::nullopt, max_size};
}

// ---- model files

std::string print_structure(const Structure &A) {
  std::string out = "domain:";
  for (const auto &x : A.domain()) out += " " + x;
  out += "\n";
  for (const auto &[p, ext] : A.unary_map()) {
    out += "unary " + p + ":";
    for (size_t i = 0; i < ext.size(); ++i)
      if (ext[i]) out += " " + A.domain()[i];
    out += "\n";
  }
  for (const auto &[r, rows] : A.binary_map()) {
    out += "binary " + r + ":";
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < rows.size(); ++j)
        if (rows[i][j]) out += " (" + A.domain()[i] + "," + A.domain()[j] + ")";
    out += "\n";
  }
  return out;
}

namespace {

std::vector<std::string> words(const std::string &s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Structure parse_structure(const std::string &text) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::optional<Structure> A;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string s = raw;
    if (auto h = s.find('#'); h != std::string::npos) s = s.substr(0, h);
    s = trim(s);
    if (s.empty()) continue;
    auto colon = s.find(':');
    if (colon == std::string::npos) throw ParseError(lineno, 1, "section header", "'" + s + "'");
    std::string head = trim(s.substr(0, colon));
    std::string body = s.substr(colon + 1);
    auto hw = words(head);
    if (hw.size() == 1 && hw[0] == "domain") {
      if (A) throw ParseError(lineno, 1, "unary or binary section", "second domain line");
      auto dom = words(body);
      if (dom.empty()) throw ParseError(lineno, static_cast<int>(colon) + 2, "element", "end of line");
      try {
        A.emplace(dom);
      } catch (const std::invalid_argument &e) {
        throw ParseError(lineno, 1, "distinct elements", e.what());
      }
      continue;
    }
    if (!A) throw ParseError(lineno, 1, "domain line", "'" + head + "'");
    if (hw.size() != 2 || (hw[0] != "unary" && hw[0] != "binary"))
      throw ParseError(lineno, 1, "\"unary <atom>\" or \"binary <atom>\"", "'" + head + "'");
    try {
      if (hw[0] == "unary") {
        A->declare_unary(hw[1]);
        for (const auto &x : words(body)) {
          if (A->index(x) < 0) throw ParseError(lineno, 1, "domain element", "'" + x + "'");
          A->add_unary(hw[1], x);
        }
      } else {
        A->declare_binary(hw[1]);
        std::string b = body;
        size_t pos = 0;
        while (true) {
          size_t open = b.find('(', pos);
          if (open == std::string::npos) {
            if (!trim(b.substr(pos)).empty())
              throw ParseError(lineno, 1, "\"(\"", "'" + trim(b.substr(pos)) + "'");
            break;
          }
          size_t close = b.find(')', open);
          if (close == std::string::npos) throw ParseError(lineno, 1, "\")\"", "end of line");
          std::string inner = b.substr(open + 1, close - open - 1);
          auto comma = inner.find(',');
          if (comma == std::string::npos) throw ParseError(lineno, 1, "\",\"", "'" + inner + "'");
          std::string x = trim(inner.substr(0, comma)), y = trim(inner.substr(comma + 1));
          if (A->index(x) < 0) throw ParseError(lineno, 1, "domain element", "'" + x + "'");
          if (A->index(y) < 0) throw ParseError(lineno, 1, "domain element", "'" + y + "'");
          A->add_binary(hw[1], x, y);
          pos = close + 1;
        }
      }
    } catch (const NamespaceError &e) {
      throw ParseError(lineno, 1, "atom of a single kind", e.what());
    }
  }
  if (!A) throw ParseError(lineno + 1, 1, "domain line", "end of input");
  return *A;
}

}  // namespace syllo
