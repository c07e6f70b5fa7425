#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace syllo {

struct UnaryLiteral {
  std::string atom;
  bool positive = true;
};

struct BinaryLiteral {
  std::string atom;
  bool positive = true;
};

// positive sorts before negative
std::strong_ordering operator<=>(const UnaryLiteral &a, const UnaryLiteral &b);
bool operator==(const UnaryLiteral &a, const UnaryLiteral &b);
std::strong_ordering operator<=>(const BinaryLiteral &a, const BinaryLiteral &b);
bool operator==(const BinaryLiteral &a, const BinaryLiteral &b);

inline UnaryLiteral complement(const UnaryLiteral &l) { return {l.atom, !l.positive}; }
inline BinaryLiteral complement(const BinaryLiteral &t) { return {t.atom, !t.positive}; }

enum class TermKind : std::uint8_t { Literal = 0, Exists = 1, Forall = 2 };

// e-term; verb is empty for literals
struct ETerm {
  TermKind kind = TermKind::Literal;
  UnaryLiteral subject;
  BinaryLiteral verb;

  bool is_literal() const { return kind == TermKind::Literal; }
};

std::strong_ordering operator<=>(const ETerm &a, const ETerm &b);
bool operator==(const ETerm &a, const ETerm &b);

enum class Quantifier : std::uint8_t { Some, All };

struct Formula {
  Quantifier quantifier = Quantifier::All;
  ETerm left;
  ETerm right;
};

std::strong_ordering operator<=>(const Formula &a, const Formula &b);
bool operator==(const Formula &a, const Formula &b);

enum class Fragment : std::uint8_t { S = 0, Sd, R, Rd, Rs, Rsd };
constexpr int kFragmentCount = 6;

// bitmask over Fragment
struct FragmentSet {
  std::uint8_t bits = 0;
  bool has(Fragment f) const { return bits & (1u << static_cast<int>(f)); }
  void add(Fragment f) { bits |= (1u << static_cast<int>(f)); }
  bool operator==(const FragmentSet &) const = default;
};

std::string fragment_name(Fragment f);
std::optional<Fragment> parse_fragment(const std::string &s);
std::string to_string(FragmentSet fs);

struct Signature {
  std::set<std::string> unaries;
  std::set<std::string> binaries;

  void merge(const Signature &o);
  bool operator==(const Signature &) const = default;
};

class NamespaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// constructors
UnaryLiteral ulit(const std::string &atom, bool positive = true);
BinaryLiteral blit(const std::string &atom, bool positive = true);
ETerm lit(const std::string &atom, bool positive = true);
ETerm lit(const UnaryLiteral &l);
ETerm ex(const UnaryLiteral &l, const BinaryLiteral &t);
ETerm all(const UnaryLiteral &l, const BinaryLiteral &t);
Formula Some(const ETerm &e, const ETerm &f);
Formula All(const ETerm &e, const ETerm &f);

ETerm complement(const ETerm &e);
Formula bar(const Formula &phi);

// identified representatives, the formula itself first
std::vector<Formula> representatives(const Formula &phi);
Formula canonicalize(const Formula &phi);
bool is_canonical(const Formula &phi);

bool is_cterm(const ETerm &e);
bool is_positive_cterm(const ETerm &e);

FragmentSet classify(const Formula &phi);
bool in_fragment(const Formula &phi, Fragment f);

bool is_absurdity(const Formula &phi);
bool is_universal(const Formula &phi);

Signature atoms(const ETerm &e);
Signature atoms(const Formula &phi);
Signature atoms(const std::vector<Formula> &phis);

// throws NamespaceError when a name is both unary and binary
void check_namespaces(const Signature &sig);

// all e-terms over a signature: literals then quantified terms
std::vector<ETerm> all_eterms(const Signature &sig);
std::vector<ETerm> all_cterms(const Signature &sig);
std::vector<ETerm> all_positive_cterms(const Signature &sig);
std::vector<UnaryLiteral> all_uliterals(const Signature &sig);

// every canonical formula over sig lying in fragment f
std::vector<Formula> all_formulas(const Signature &sig, Fragment f);

}  // namespace syllo
