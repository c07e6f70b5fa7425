#include <doctest.h>

#include "support.hpp"
#include "syllo/deciders.hpp"
#include "syllo/fixtures.hpp"

using namespace syllo;
using namespace syllo::testing;

namespace {

std::vector<std::string> ids(const RuleSet &rs) {
  std::vector<std::string> out;
  for (const auto &r : rs.rules) out.push_back(r.id);
  return out;
}

std::set<Formula> canon_set(const std::vector<Formula> &v) {
  std::set<Formula> s;
  for (const auto &f : v) s.insert(canonicalize(f));
  return s;
}

// indirect example: (D3), (AA), (D1), (RAA) discharging some(art, bkpr) twice
const char *kIndirectExample =
    "raa #1 -> all(art, ~bkpr)\n"
    "  rule D3 {c=some(bkpr, hate), p=bkpr, q=bkpr} -> some(bkpr, ~bkpr)\n"
    "    premise all(bkpr, all(bkpr, ~hate))\n"
    "    rule D1 {c=some(bkpr, hate), p=bkpr, q=art} -> some(bkpr, some(bkpr, hate))\n"
    "      rule AA {p=art, q=bkpr, q2=art, t=hate} -> all(art, some(bkpr, hate))\n"
    "        premise all(art, all(art, hate))\n"
    "        premise some(art, bkpr) #1\n"
    "      premise some(art, bkpr) #1\n";

std::vector<Formula> indirect_premises() { return Fs({"all(art, all(art, hate))", "all(bkpr, all(bkpr, ~hate))"}); }

}  // namespace

TEST_CASE("rule tables") {
  using V = std::vector<std::string>;
  CHECK(ids(rule_set(RuleSetId::S)) == V{"D1", "D2", "D3", "B", "A", "T", "I", "X"});
  CHECK(ids(rule_set(RuleSetId::Sd)) == V{"D", "B", "A", "T", "I", "X", "N"});
  CHECK(ids(rule_set(RuleSetId::R)) == V{"D1", "B", "D2", "T", "I", "D3", "A", "II", "AA", "EE", "AE"});
  CHECK(ids(rule_set(RuleSetId::Rs)) == V{"T", "I", "B", "D1", "D2", "J", "K", "L", "II", "Z", "W"});
}

TEST_CASE("instantiate") {
  const RuleSet &S = rule_set(RuleSetId::S);
  auto d1 = instantiate(*S.find("D1"), {{"p", lit("carpenter")}, {"q", lit("beekeeper")}, {"l", lit("dentist", false)}});
  CHECK(canon_set(d1.antecedents) == canon_set(Fs({"some(carpenter, beekeeper)", "all(beekeeper, ~dentist)"})));
  CHECK(d1.consequent == canonicalize(F("some(carpenter, ~dentist)")));

  auto t = instantiate(*S.find("T"), {{"p", lit("p")}});
  CHECK(t.antecedents.empty());
  CHECK(t.consequent == canonicalize(F("all(p, p)")));

  const RuleSet &Rs = rule_set(RuleSetId::Rs);
  auto j = instantiate(*Rs.find("J"), {{"p", lit("p")}, {"q", lit("q")}, {"r", blit("r")}});
  CHECK(canon_set(j.antecedents) == canon_set(Fs({"all(p, q)"})));
  CHECK(j.consequent == canonicalize(F("all(all(q, r), all(p, r))")));

  CHECK_THROWS_AS(instantiate(*Rs.find("T"), {{"c", lit("p", false)}}), SortError);
  CHECK_THROWS_AS(instantiate(*S.find("T"), {{"p", ex(ulit("p"), blit("r"))}}), SortError);
}

TEST_CASE("match_rule") {
  const RuleSet &S = rule_set(RuleSetId::S);
  Signature sig = make_sig({"p", "q", "o"});
  auto m = match_rule(*S.find("D1"), Fs({"all(q, o)", "some(q, p)"}), sig, Fragment::S);
  bool found = false;
  for (const auto &x : m) found |= x.consequent == canonicalize(F("some(p, o)"));
  CHECK(found);

  auto t = match_rule(*S.find("T"), {}, sig, Fragment::S);
  CHECK(t.size() == 3);

  auto a = match_rule(*S.find("A"), Fs({"all(p, ~p)"}), sig, Fragment::S);
  std::set<Formula> got;
  for (const auto &x : a) got.insert(x.consequent);
  for (const auto &l : all_uliterals(sig)) CHECK(got.count(canonicalize(All(lit("p"), lit(l)))));
}

TEST_CASE("check_derivation accepts the two-step D1 derivation") {
  const RuleSet &S = rule_set(RuleSetId::S);
  auto theta = Fs({"some(artist, beekeeper)", "all(artist, carpenter)", "all(beekeeper, ~dentist)"});
  auto step1 = apply_rule(S, "D1", {{"p", lit("beekeeper")}, {"q", lit("artist")}, {"l", lit("carpenter")}},
                          {make_premise(theta[1]), make_premise(theta[0])});
  auto step2 = apply_rule(S, "D1", {{"p", lit("carpenter")}, {"q", lit("beekeeper")}, {"l", lit("dentist", false)}},
                          {make_premise(theta[2]), step1});
  CHECK(check_derivation(*step2, S, theta) == canonicalize(F("some(carpenter, ~dentist)")));
  CHECK(step2->is_direct());
  CHECK(parse_derivation(print_derivation(*step2), S)->node_count() == step2->node_count());
}

TEST_CASE("indirect example checks verbatim") {
  const RuleSet &R = rule_set(RuleSetId::R);
  auto d = parse_derivation(kIndirectExample, R);
  CHECK(print_derivation(*d) == kIndirectExample);
  CHECK(check_derivation(*d, R, indirect_premises()) == canonicalize(F("all(art, ~bkpr)")));
  CHECK_FALSE(d->is_direct());

  std::string bad = kIndirectExample;
  bad.replace(bad.rfind("#1"), 2, "#2");
  try {
    check_derivation(*parse_derivation(bad, R), R, indirect_premises());
    FAIL("accepted");
  } catch (const CheckError &e) {
    CHECK(e.kind == CheckError::BadDischarge);
  }
}

TEST_CASE("check errors") {
  const RuleSet &S = rule_set(RuleSetId::S);
  auto theta = Fs({"all(p, q)", "all(q, o)"});
  auto good = apply_rule(S, "B", {{"p", lit("p")}, {"q", lit("q")}, {"l", lit("o")}},
                         {make_premise(theta[0]), make_premise(theta[1])});
  CHECK(check_derivation(*good, S, theta) == canonicalize(F("all(p, o)")));

  auto expect_kind = [&](const Derivation &d, CheckError::Kind k, const std::vector<Formula> &th) {
    try {
      check_derivation(d, S, th);
      FAIL("accepted");
    } catch (const CheckError &e) {
      CHECK(e.kind == k);
    }
  };
  auto unknown = make_rule("Q", good->subst, good->children, good->conclusion);
  expect_kind(*unknown, CheckError::UnknownRule, theta);
  auto wrong = make_rule("B", good->subst, good->children, F("all(p, ~o)"));
  expect_kind(*wrong, CheckError::BadInstance, theta);
  expect_kind(*good, CheckError::UndischargedPremise, {theta[0]});
  auto raa = make_raa(1, good, F("all(p, q)"));
  expect_kind(*raa, CheckError::NotAbsurdity, theta);
}

TEST_CASE("saturate") {
  const RuleSet &S = rule_set(RuleSetId::S);
  auto carpenter = Fs({"some(artist, beekeeper)", "all(artist, carpenter)", "all(beekeeper, ~dentist)"});
  auto sat = saturate(carpenter, S);
  CHECK(sat.contains(F("some(carpenter, ~dentist)")));
  CHECK_FALSE(sat.contradiction);

  auto g = gamma_fixture(4);
  auto satR = saturate(g.formulas("Gamma"), rule_set(RuleSetId::R));
  CHECK_FALSE(satR.contains(g.formulas("gamma")[0]));

  auto gs = gamma_star_fixture(4);
  auto neg = gs.gamma;
  neg.push_back(bar(gs.goal));
  auto satG = saturate(neg, rule_set(RuleSetId::R));
  bool absurd = false;
  for (const auto &f : satG.formulas()) absurd |= is_absurdity(f);
  CHECK(absurd);
  CHECK(satG.contains(F("some(p1, ~p1)")));
}

TEST_CASE("reserved binary atom") {
  auto sat = saturate(Fs({"all(p, q)"}), rule_set(RuleSetId::R));
  CHECK(sat.sig.binaries.count(sat.fresh_binary));
  auto clash = saturate(Fs({"all(_r, q)"}), rule_set(RuleSetId::R));
  CHECK(clash.fresh_binary != "_r");
}

TEST_CASE("derive and refute") {
  const RuleSet &S = rule_set(RuleSetId::S);
  auto t = derive({}, F("all(p, p)"), S);
  REQUIRE(t);
  CHECK(t->rule == "T");
  auto carpenter = Fs({"some(artist, beekeeper)", "all(artist, carpenter)", "all(beekeeper, ~dentist)"});
  auto d = derive(carpenter, F("some(carpenter, ~dentist)"), S);
  REQUIRE(d);
  CHECK(check_derivation(*d, S, carpenter) == canonicalize(F("some(carpenter, ~dentist)")));
  CHECK_FALSE(derive(Fs({"all(p, q)"}), F("some(p, q)"), S));

  auto r1 = refute(Fs({"some(p, ~p)"}), S);
  REQUIRE(r1);
  CHECK(r1->kind == Derivation::Premise);

  auto gs = gamma_star_fixture(5);
  auto neg = gs.gamma;
  neg.push_back(bar(gs.goal));
  auto r2 = refute(neg, rule_set(RuleSetId::R));
  REQUIRE(r2);
  CHECK(is_absurdity(check_derivation(*r2, rule_set(RuleSetId::R), neg)));

  CHECK_FALSE(refute(carpenter, S));
  CHECK(find_model(carpenter, 3).found());
}

TEST_CASE("property: saturation is monotone and idempotent") {
  Rng rng(41);
  Signature sig = make_sig({"p", "q"}, {"r"});
  auto pool = all_formulas(sig, Fragment::R);
  const RuleSet &R = rule_set(RuleSetId::R);
  for (int k = 0; k < 25; ++k) {
    auto theta = random_subset(rng, pool, 1, 4);
    auto once = saturate_set(theta, R);
    std::set<Formula> s1(once.begin(), once.end());
    for (const auto &f : theta) CHECK(s1.count(canonicalize(f)));
    auto twice = saturate_set(once, R);
    CHECK(std::set<Formula>(twice.begin(), twice.end()) == s1);
  }
}

TEST_CASE("property: rules are sound on random instances") {
  Rng rng(43);
  Signature sig = make_sig({"p", "q"}, {"r"});
  for (RuleSetId id : {RuleSetId::S, RuleSetId::Sd, RuleSetId::R, RuleSetId::Rs}) {
    const RuleSet &rs = rule_set(id);
    for (const auto &rule : rs.rules) {
      if (rule.id == "X") continue;
      auto facts = random_subset(rng, all_formulas(sig, rs.fragment), 6, 12);
      auto ms = match_rule(rule, facts, sig, rs.fragment);
      for (size_t m = 0; m < ms.size() && m < 30; ++m) {
        auto v = oracle_valid(ms[m].antecedents, ms[m].consequent, 3);
        CHECK_MESSAGE(v.valid_within_bound, rule.id, " ", print_formula(ms[m].consequent));
      }
    }
  }
}

TEST_CASE("property: derived facts hold in every small model") {
  Rng rng(47);
  Signature sig = make_sig({"p", "q"}, {"r"});
  auto pool = all_formulas(sig, Fragment::R);
  const RuleSet &R = rule_set(RuleSetId::R);
  int checked = 0;
  for (int k = 0; k < 60 && checked < 1000; ++k) {
    auto theta = random_subset(rng, pool, 1, 4);
    auto sat = saturate(theta, R);
    if (sat.contradiction) continue;
    auto m = find_model(theta, 4);
    auto facts = sat.formulas();
    for (int j = 0; j < 20; ++j) {
      const Formula &phi = facts[pick(rng, static_cast<int>(facts.size()))];
      auto d = extract_derivation(sat, phi);
      REQUIRE(d);
      CHECK(check_derivation(*d, R, theta) == phi);
      if (m.found()) CHECK(satisfies(*m.model, phi).holds);
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("property: a final raa closes every refutation") {
  Rng rng(53);
  Signature sig = make_sig({"p", "q"}, {"r"});
  auto pool = all_formulas(sig, Fragment::R);
  const RuleSet &R = rule_set(RuleSetId::R);
  int closed = 0;
  for (int k = 0; k < 150; ++k) {
    auto theta = random_subset(rng, pool, 1, 4);
    Formula goal = pool[pick(rng, static_cast<int>(pool.size()))];
    auto neg = theta;
    neg.push_back(bar(goal));
    auto r = refute(neg, R);
    if (!r) continue;
    auto d = close_by_raa(r, goal, theta);
    CHECK(check_derivation(*d, R, theta) == canonicalize(goal));
    ++closed;
  }
  CHECK(closed > 10);
}

TEST_CASE("D1 is redundant in S") {
  const RuleSet &S = rule_set(RuleSetId::S);
  RuleSet sub = restrict_rules(S, {"D2", "D3"});
  Signature sig = make_sig({"p", "q", "o"});
  const RuleSchema &d1 = *S.find("D1");
  int n = 0;
  for (const auto &p : sig.unaries)
    for (const auto &q : sig.unaries)
      for (const auto &l : all_uliterals(sig)) {
        auto inst = instantiate(d1, {{"p", lit(p)}, {"q", lit(q)}, {"l", lit(l)}});
        auto sat = saturate(inst.antecedents, sub);
        CHECK_MESSAGE(sat.contains(inst.consequent), print_formula(inst.consequent));
        ++n;
      }
  CHECK(n == 54);
}

TEST_CASE("S-dagger rules on S formulas are exactly the S rules") {
  Rng rng(59);
  Signature sig = make_sig({"p", "q", "o"});
  auto pool = all_formulas(sig, Fragment::S);
  const RuleSet &S = rule_set(RuleSetId::S), &Sd = rule_set(RuleSetId::Sd);
  for (int k = 0; k < 60; ++k) {
    auto facts = random_subset(rng, pool, 1, 4);
    std::set<Formula> a, b;
    for (const auto &rule : S.rules)
      if (rule.id != "X")
        for (const auto &m : match_rule(rule, facts, sig, Fragment::S)) a.insert(m.consequent);
    for (const auto &rule : Sd.rules)
      if (rule.id != "X")
        for (const auto &m : match_rule(rule, facts, sig, Fragment::Sd))
          if (in_fragment(m.consequent, Fragment::S)) b.insert(m.consequent);
    CHECK(a == b);
  }
}

TEST_CASE("rule A is derivable in R* with reductio") {
  const RuleSet &Rs = rule_set(RuleSetId::Rs);
  Signature sig = make_sig({"p", "q"}, {"r"});
  int n = 0;
  for (const auto &p : sig.unaries)
    for (const auto &d : all_cterms(sig)) {
      Formula premise = All(lit(p), lit(p, false)), goal = All(lit(p), d);
      auto assumption = make_premise(Some(lit(p), complement(d)), 1);
      auto i = apply_rule(Rs, "I", {{"c", lit(p)}, {"d", complement(d)}}, {assumption});
      auto d1 = apply_rule(Rs, "D1", {{"b", lit(p)}, {"c", lit(p)}, {"d", lit(p, false)}}, {i, make_premise(premise)});
      auto proof = make_raa(1, d1, goal);
      CHECK(canonicalize(check_derivation(*proof, Rs, {premise})) == canonicalize(goal));
      ++n;
    }
  CHECK(n == 2 * 12);
}
