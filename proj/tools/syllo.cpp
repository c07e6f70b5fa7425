#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "syllo/calculus.hpp"
#include "syllo/deciders.hpp"
#include "syllo/fixtures.hpp"
#include "syllo/semantics.hpp"
#include "syllo/surface.hpp"

using namespace syllo;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUnknown = 2, kInput = 3, kInternal = 4 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string format = "text";
  long seed = 0;
  int bound = 0;
  std::string fragment;
  std::string system;
  bool indirect = false;
  std::string file, proof;
  int n = 4;
  int i = 0;
  std::string out;
  std::string name;
};

bool structured(const Config &c) { return c.format == "structured"; }

void emit(const Config &c, const std::string &text, const json &j) {
  if (structured(c)) std::cout << j.dump(2) << "\n";
  else std::cout << text;
}

std::optional<Fragment> fragment_flag(const Config &c) {
  if (c.fragment.empty()) return std::nullopt;
  auto f = parse_fragment(c.fragment);
  if (!f) throw InputError("unknown fragment '" + c.fragment + "'");
  return f;
}

const RuleSet &system_flag(const Config &c) {
  auto id = parse_ruleset(c.system);
  if (!id) throw InputError("unknown system '" + c.system + "' (expected S, Sd, R or Rs)");
  return rule_set(*id);
}

std::string read_input(const std::string &path) {
  if (!std::filesystem::is_regular_file(path)) throw InputError("cannot open " + path);
  return read_file(path);
}

SequentFile load_sequent(const std::string &path) { return parse_sequent(read_input(path)); }

std::vector<Formula> all_formulas_of(const SequentFile &s) {
  auto v = s.premises;
  if (s.conclusion) v.push_back(*s.conclusion);
  return v;
}

void require_fragment(const std::vector<Formula> &phis, Fragment f) {
  for (const auto &phi : phis)
    if (!in_fragment(phi, f))
      throw FragmentError(print_formula(phi) + " is not in fragment " + fragment_name(f));
}

json formulas_json(const std::vector<Formula> &phis) {
  json a = json::array();
  for (const auto &phi : phis) a.push_back(print_formula(phi));
  return a;
}

json condition_c_json(const ConditionCWitness &c, const std::vector<std::string> &legend) {
  json j;
  j["case"] = c.case_no;
  json els = json::array();
  for (const auto &w : c.elements) els.push_back(witness_name(w));
  j["elements"] = els;
  j["q"] = c.q;
  if (!c.o.empty()) j["o"] = c.o;
  if (!c.r.empty()) j["r"] = c.r;
  j["witnesses"] = legend;
  return j;
}

void verify_refutation(const Derivation &d, const std::string &system, const std::vector<Formula> &theta) {
  auto id = parse_ruleset(system);
  if (!id) throw VerifyError("unknown rule set " + system);
  try {
    Formula c = check_derivation(d, rule_set(*id), theta);
    if (!is_absurdity(canonicalize(c))) throw VerifyError("refutation ends in " + print_formula(c));
  } catch (const CheckError &e) {
    throw VerifyError(std::string("refutation rejected: ") + e.what());
  }
}

void verify_proof(const Derivation &d, const std::string &system, const std::vector<Formula> &theta,
                  const Formula &goal) {
  auto id = parse_ruleset(system);
  if (!id) throw VerifyError("unknown rule set " + system);
  try {
    Formula c = check_derivation(d, rule_set(*id), theta);
    if (canonicalize(c) != canonicalize(goal)) throw VerifyError("derivation ends in " + print_formula(c));
  } catch (const CheckError &e) {
    throw VerifyError(std::string("derivation rejected: ") + e.what());
  }
}

// ---- subcommands

int cmd_parse(const Config &c) {
  auto seq = load_sequent(c.file);
  auto frag = fragment_flag(c);
  std::string text;
  json j = json::array();
  auto line = [&](const Formula &phi, bool concl) {
    if (frag && !in_fragment(phi, *frag))
      throw FragmentError(print_formula(phi) + " is not in fragment " + fragment_name(*frag));
    Formula cf = canonicalize(phi);
    std::string tags = to_string(classify(phi));
    text += (concl ? "|- " : "") + print_formula(cf) + "  [" + tags + "]\n";
    j.push_back({{"formula", print_formula(phi)}, {"canonical", print_formula(cf)}, {"fragments", tags},
                 {"conclusion", concl}});
  };
  for (const auto &phi : seq.premises) line(phi, false);
  if (seq.conclusion) line(*seq.conclusion, true);
  emit(c, text, j);
  return kOk;
}

int cmd_gloss(const Config &c) {
  auto seq = load_sequent(c.file);
  std::string text;
  json j = json::array();
  for (const auto &phi : seq.premises) {
    text += gloss(phi) + "\n";
    j.push_back(gloss(phi));
  }
  if (seq.conclusion) {
    text += "Therefore: " + gloss(*seq.conclusion) + "\n";
    j.push_back("Therefore: " + gloss(*seq.conclusion));
  }
  emit(c, text, j);
  return kOk;
}

int cmd_sat(const Config &c) {
  auto seq = load_sequent(c.file);
  if (seq.conclusion) throw InputError("sat takes a premise set without a |- line");
  auto force = fragment_flag(c);
  if (!force && seq.declared_fragment) force = seq.declared_fragment;
  Verdict v = decide(seq.premises, c.bound, force);
  if (v.model && !models(*v.model, seq.premises)) throw VerifyError("model does not satisfy the premises");
  if (v.refutation) verify_refutation(*v.refutation, v.system, seq.premises);

  json j;
  j["verdict"] = v.kind == Verdict::Sat ? "sat" : v.kind == Verdict::Unsat ? "unsat" : "unknown-bound";
  if (v.bounded) j["bound"] = v.bound;
  if (v.model) j["model"] = print_structure(*v.model);
  if (v.condition_c) j["condition_c"] = condition_c_json(*v.condition_c, v.element_legend);
  if (v.refutation) {
    j["system"] = v.system;
    j["derivation"] = print_derivation(*v.refutation);
  }
  emit(c, print_verdict(v), j);
  return v.kind == Verdict::Sat ? kOk : v.kind == Verdict::Unsat ? kNegative : kUnknown;
}

int cmd_valid(const Config &c) {
  auto seq = load_sequent(c.file);
  if (!seq.conclusion) throw InputError("valid needs a conclusion line starting with '|- '");
  auto force = fragment_flag(c);
  if (!force && seq.declared_fragment) force = seq.declared_fragment;
  ValidVerdict v = decide_valid(seq.premises, *seq.conclusion, c.bound, force);
  if (v.countermodel) {
    if (!models(*v.countermodel, seq.premises) || satisfies(*v.countermodel, *seq.conclusion).holds)
      throw VerifyError("countermodel does not refute the sequent");
  }
  if (v.derivation) verify_proof(*v.derivation, v.system, seq.premises, *seq.conclusion);

  json j;
  j["verdict"] = v.kind == ValidVerdict::Valid ? "valid" : v.kind == ValidVerdict::Invalid ? "invalid" : "unknown-bound";
  if (v.bounded) j["bound"] = v.bound;
  if (v.countermodel) j["countermodel"] = print_structure(*v.countermodel);
  if (v.condition_c) j["condition_c"] = condition_c_json(*v.condition_c, v.element_legend);
  if (v.derivation) {
    j["system"] = v.system;
    j["derivation"] = print_derivation(*v.derivation);
  }
  emit(c, print_valid_verdict(v), j);
  return v.kind == ValidVerdict::Valid ? kOk : v.kind == ValidVerdict::Invalid ? kNegative : kUnknown;
}

int cmd_prove(const Config &c) {
  auto seq = load_sequent(c.file);
  if (!seq.conclusion) throw InputError("prove needs a conclusion line starting with '|- '");
  const RuleSet &rs = system_flag(c);
  require_fragment(all_formulas_of(seq), rs.fragment);
  DerivationPtr d;
  if (c.indirect) {
    auto theta = seq.premises;
    theta.push_back(bar(*seq.conclusion));
    if (auto r = refute(theta, rs)) d = close_by_raa(r, *seq.conclusion, seq.premises);
  } else {
    d = derive(seq.premises, *seq.conclusion, rs);
  }
  json j;
  j["system"] = ruleset_name(rs.id);
  j["indirect"] = c.indirect;
  if (!d) {
    j["result"] = "not-derivable";
    emit(c, "result: not-derivable\nsystem: " + ruleset_name(rs.id) + "\n", j);
    return kNegative;
  }
  verify_proof(*d, ruleset_name(rs.id), seq.premises, *seq.conclusion);
  j["result"] = "derivable";
  j["derivation"] = print_derivation(*d);
  emit(c, "result: derivable\nsystem: " + ruleset_name(rs.id) + "\nderivation:\n" + print_derivation(*d), j);
  return kOk;
}

int cmd_check(const Config &c) {
  auto seq = load_sequent(c.file);
  const RuleSet &rs = system_flag(c);
  std::string text = read_input(c.proof);
  // accept the output of prove as is
  if (auto at = text.find("derivation:\n"); at != std::string::npos && (at == 0 || text[at - 1] == '\n'))
    text = std::string(std::count(text.begin(), text.begin() + at, '\n') + 1, '\n') + text.substr(at + 12);
  auto d = parse_derivation(text, rs);
  json j;
  try {
    Formula concl = check_derivation(*d, rs, seq.premises);
    if (seq.conclusion && canonicalize(concl) != canonicalize(*seq.conclusion)) {
      j["result"] = "rejected";
      j["error"] = "conclusion mismatch";
      emit(c, "result: rejected\nerror: conclusion " + print_formula(concl) + " does not match " +
                  print_formula(*seq.conclusion) + "\n",
           j);
      return kNegative;
    }
    j["result"] = "accepted";
    j["conclusion"] = print_formula(concl);
    emit(c, "result: accepted\nconclusion: " + print_formula(concl) + "\n", j);
    return kOk;
  } catch (const CheckError &e) {
    j["result"] = "rejected";
    j["error"] = check_error_name(e.kind);
    j["message"] = e.what();
    emit(c, "result: rejected\nerror: " + check_error_name(e.kind) + ": " + e.what() + "\n", j);
    return kNegative;
  }
}

int cmd_theory(const Config &c) {
  Structure A = parse_structure(read_input(c.file));
  auto frag = fragment_flag(c);
  if (!frag) throw InputError("theory needs --fragment");
  auto th = theory(A, *frag, A.signature());
  std::string text;
  for (const auto &phi : th) text += print_formula(phi) + "\n";
  emit(c, text, formulas_json(th));
  return kOk;
}

void write_file(const std::filesystem::path &p, const std::string &body) {
  std::ofstream out(p);
  if (!out) throw InputError("cannot write " + p.string());
  out << body;
}

int cmd_fixtures(const Config &c) {
  if (c.out.empty()) throw InputError("fixtures needs --out DIR");
  std::filesystem::create_directories(c.out);
  std::filesystem::path dir(c.out);
  std::vector<std::string> written;
  auto put = [&](const std::string &file, const std::string &body) {
    write_file(dir / file, body);
    written.push_back(file);
  };
  auto put_bundle = [&](const FixtureBundle &b) {
    for (const auto &[name, S] : b.structures) put(name + ".model", print_structure(S));
    for (const auto &[name, phis] : b.formula_sets) put(name + ".syl", print_sequent({phis, std::nullopt, {}}));
    std::string facts;
    for (const auto &f : b.expected_facts)
      facts += f.structure + (f.truth ? " |= " : " |/= ") + print_formula(f.formula) + "\n";
    put("facts.txt", facts);
  };
  try {
    if (c.name == "gamma") {
      auto b = gamma_fixture(c.n);
      put_bundle(b);
      put("sequent.syl", print_sequent({b.formulas("Gamma"), b.formulas("gamma")[0], Fragment::R}));
    } else if (c.name == "gamma-star") {
      auto g = gamma_star_fixture(c.n);
      put("sequent.syl", print_sequent({g.gamma, g.goal, Fragment::R}));
      auto neg = g.gamma;
      neg.push_back(bar(g.goal));
      put("refutable.syl", print_sequent({neg, std::nullopt, Fragment::R}));
    } else if (c.name == "twin") {
      put_bundle(twin_fixture(c.n, c.i > 0 ? std::optional<int>(c.i) : std::nullopt));
    } else {
      throw InputError("unknown fixture '" + c.name + "' (expected gamma, gamma-star or twin)");
    }
  } catch (const std::invalid_argument &e) {
    throw InputError(e.what());
  }
  std::string text;
  for (const auto &f : written) text += (dir / f).string() + "\n";
  json j = json::array();
  for (const auto &f : written) j.push_back((dir / f).string());
  emit(c, text, j);
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"syllogistic fragments: parsing, deciding, proving"};
  app.require_subcommand(1);
  Config c;
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--seed", c.seed, "seed for randomized runs");

  auto *parse = app.add_subcommand("parse", "echo canonical forms and fragment tags");
  parse->add_option("FILE", c.file)->required();
  parse->add_option("--fragment", c.fragment);

  auto *gl = app.add_subcommand("gloss", "English rendering");
  gl->add_option("FILE", c.file)->required();

  auto *sat = app.add_subcommand("sat", "satisfiability of a premise set");
  sat->add_option("FILE", c.file)->required();
  sat->add_option("--bound", c.bound, "model size bound for R* fragments")->check(CLI::PositiveNumber);
  sat->add_option("--fragment", c.fragment);

  auto *valid = app.add_subcommand("valid", "validity of a sequent");
  valid->add_option("FILE", c.file)->required();
  valid->add_option("--bound", c.bound, "model size bound for R* fragments")->check(CLI::PositiveNumber);
  valid->add_option("--fragment", c.fragment);

  auto *prove = app.add_subcommand("prove", "search for a derivation");
  prove->add_option("FILE", c.file)->required();
  prove->add_option("--system", c.system)->required();
  prove->add_flag("--indirect", c.indirect, "allow reductio");

  auto *check = app.add_subcommand("check-proof", "check a derivation file");
  check->add_option("PROOF", c.proof)->required();
  check->add_option("FILE", c.file)->required();
  check->add_option("--system", c.system)->required();

  auto *th = app.add_subcommand("theory", "formulas true in a model");
  th->add_option("MODEL", c.file)->required();
  th->add_option("--fragment", c.fragment)->required();

  auto *fx = app.add_subcommand("fixtures", "write a fixture bundle");
  fx->add_option("NAME", c.name)->required();
  fx->add_option("--n", c.n);
  fx->add_option("--i", c.i);
  fx->add_option("--out", c.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    star_bound_cap();  // rejects a malformed SYLLO_BOUND_CAP early
    if (*parse) return cmd_parse(c);
    if (*gl) return cmd_gloss(c);
    if (*sat) return cmd_sat(c);
    if (*valid) return cmd_valid(c);
    if (*prove) return cmd_prove(c);
    if (*check) return cmd_check(c);
    if (*th) return cmd_theory(c);
    if (*fx) return cmd_fixtures(c);
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInput;
  } catch (const FragmentMismatch &e) {
    std::cerr << "fragment error: " << e.what() << "\n";
    return kInput;
  } catch (const FragmentError &e) {
    std::cerr << "fragment error: " << e.what() << "\n";
    return kInput;
  } catch (const NamespaceError &e) {
    std::cerr << "namespace error: " << e.what() << "\n";
    return kInput;
  } catch (const InputError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const VerifyError &e) {
    std::cerr << "internal error: certificate failed re-verification: " << e.what() << "\n";
    return kInternal;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInput;
}
