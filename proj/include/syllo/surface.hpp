#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "syllo/syntax.hpp"

namespace syllo {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string expected, std::string found);
  int line;
  int column;
  std::string expected;
  std::string found;
};

class FragmentMismatch : public std::runtime_error {
 public:
  FragmentMismatch(const Formula &phi, Fragment frag, int line);
  Formula formula;
  Fragment fragment;
  int line;
};

// remembers which names were seen as unary or binary within one document
class AtomTable {
 public:
  void note(const std::string &name, bool binary, int line, int column);
  const std::map<std::string, bool> &kinds() const { return kinds_; }

 private:
  std::map<std::string, bool> kinds_;
};

Formula parse_formula(const std::string &text);
Formula parse_formula(const std::string &text, AtomTable &table, int line = 1);
ETerm parse_term(const std::string &text, AtomTable &table, int line = 1);
BinaryLiteral parse_binary_literal(const std::string &text, AtomTable &table, int line = 1);

std::string print_literal(const UnaryLiteral &l);
std::string print_literal(const BinaryLiteral &t);
std::string print_term(const ETerm &e);
std::string print_formula(const Formula &phi);

std::string gloss(const Formula &phi);
std::string gloss_term(const ETerm &e);

struct SequentFile {
  std::vector<Formula> premises;
  std::optional<Formula> conclusion;
  std::optional<Fragment> declared_fragment;
};

SequentFile parse_sequent(const std::string &text);
std::string print_sequent(const SequentFile &seq);

std::string read_file(const std::string &path);

}  // namespace syllo
