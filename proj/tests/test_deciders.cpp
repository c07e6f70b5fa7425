#include <doctest.h>

#include "support.hpp"
#include "syllo/deciders.hpp"
#include "syllo/fixtures.hpp"

using namespace syllo;
using namespace syllo::testing;

namespace {

std::vector<Formula> with_bar(std::vector<Formula> theta, const Formula &goal) {
  theta.push_back(bar(goal));
  return theta;
}

const std::vector<Formula> kCarpenter = {F("some(artist, beekeeper)"), F("all(artist, carpenter)"),
                                    F("all(beekeeper, ~dentist)")};

}  // namespace

TEST_CASE("literal closure") {
  Signature sig = make_sig({"p", "q", "o"});
  auto c = closure(Fs({"all(p, q)", "all(q, ~o)"}), {ulit("p")}, sig);
  CHECK(c.closure.count(ulit("q")));
  CHECK(c.closure.count(ulit("o", false)));
  CHECK(c.consistent());
  auto d = closure(Fs({"all(p, ~p)"}), {ulit("p")}, sig);
  CHECK_FALSE(d.consistent());
  CHECK(d.edges.at(ulit("q")).by_a);
}

TEST_CASE("S-dagger satisfiability") {
  auto a = decide_sdagger_sat(Fs({"all(p, ~p)", "all(~p, p)"}));
  CHECK(a.kind == Verdict::Unsat);

  auto b = decide_sdagger_sat(kCarpenter);
  REQUIRE(b.kind == Verdict::Sat);
  CHECK(b.model->size() <= 3);
  CHECK(models(*b.model, kCarpenter));

  auto c = decide_sdagger_sat(Fs({"some(p, q)", "all(p, ~q)"}));
  REQUIRE(c.kind == Verdict::Unsat);
  REQUIRE(c.refutation);
  CHECK(is_absurdity(check_derivation(*c.refutation, rule_set(RuleSetId::Sd), Fs({"some(p, q)", "all(p, ~q)"}))));
  CHECK_FALSE(find_model(Fs({"some(p, q)", "all(p, ~q)"}), 4).found());
}

TEST_CASE("S-dagger validity") {
  auto v = decide_sdagger_valid(kCarpenter, F("some(carpenter, ~dentist)"));
  REQUIRE(v.kind == ValidVerdict::Valid);
  CHECK(v.system == "S");
  CHECK(v.derivation->is_direct());
  CHECK(count_rule(*v.derivation, "D1") == 2);

  auto theta = Fs({"all(~q, q)", "all(~p, p)"});
  auto n = decide_sdagger_valid(theta, F("some(q, p)"));
  REQUIRE(n.kind == ValidVerdict::Valid);
  CHECK(n.system == "Sd");
  CHECK(count_rule(*n.derivation, "N") >= 1);
  CHECK(check_derivation(*n.derivation, rule_set(RuleSetId::Sd), theta) == canonicalize(F("some(q, p)")));

  // no existential premise, yet rule N forces some(q, q)
  auto u = decide_sdagger_sat(Fs({"all(~q, q)", "all(q, ~q)", "all(o, p)"}));
  REQUIRE(u.kind == Verdict::Unsat);
  CHECK(count_rule(*u.refutation, "N") == 1);

  auto w = decide_sdagger_valid(Fs({"all(p, q)"}), F("some(p, q)"));
  REQUIRE(w.kind == ValidVerdict::Invalid);
  CHECK_FALSE(w.countermodel->in_unary("p", 0));
}

TEST_CASE("witness sets") {
  WitnessSet a(Fs({"some(p, q)"}));
  REQUIRE(a.elements().size() == 1);
  CHECK(a.elements()[0].V == std::set<ETerm>{lit("p"), lit("q")});

  WitnessSet b(Fs({"some(p, some(q, r))"}));
  std::set<WitnessId> els(b.elements().begin(), b.elements().end());
  CHECK(els.count(WitnessId{{lit("p"), ex(ulit("q"), blit("r"))}, 0}));
  CHECK(els.count(WitnessId{{lit("q")}, 1}));
  CHECK(els.count(WitnessId{{lit("q")}, 2}));

  auto gs = gamma_star_fixture(3);
  WitnessSet c(with_bar(gs.gamma, gs.goal));
  for (int k = 1; k <= 3; ++k) {
    bool seen = false;
    for (const auto &w : c.elements()) seen |= w.V.count(lit(chain_atom(k))) > 0;
    CHECK(seen);
  }
}

TEST_CASE("condition C") {
  auto a = check_condition_C(WitnessSet(Fs({"some(p, ~p)"})));
  REQUIRE(a);
  CHECK(a->case_no == 1);

  auto gs = gamma_star_fixture(3);
  CHECK(check_condition_C(WitnessSet(with_bar(gs.gamma, gs.goal))));

  auto g = gamma_fixture(4);
  for (int i = 1; i < 4; ++i) CHECK_FALSE(check_condition_C(WitnessSet(g.formulas("Delta" + std::to_string(i)))));
}

TEST_CASE("R satisfiability and validity") {
  auto gs = gamma_star_fixture(4);
  auto neg = with_bar(gs.gamma, gs.goal);
  auto a = decide_r_sat(neg);
  REQUIRE(a.kind == Verdict::Unsat);
  CHECK(a.system == "R");
  Formula last = check_derivation(*a.refutation, rule_set(RuleSetId::R), neg);
  CHECK(is_absurdity(last));
  CHECK(last.left.is_literal());

  auto g = gamma_fixture(4);
  auto b = decide_r_sat(g.formulas("Delta2"));
  REQUIRE(b.kind == Verdict::Sat);
  CHECK(models(*b.model, g.formulas("Delta2")));

  auto c = Fs({"some(p, all(q, ~r))", "all(p, all(q, r))", "some(q, q)"});
  CHECK(decide_r_sat(c).kind == Verdict::Unsat);
  CHECK_FALSE(find_model(c, 6).found());

  auto v = decide_r_valid(gs.gamma, gs.goal);
  REQUIRE(v.kind == ValidVerdict::Valid);
  CHECK(check_derivation(*v.derivation, rule_set(RuleSetId::R), gs.gamma) == canonicalize(gs.goal));

  auto beekeeper = Fs({"some(artist, some(artist, hate))", "all(beekeeper, all(beekeeper, ~hate))"});
  auto s2 = decide_r_valid(beekeeper, F("some(artist, ~beekeeper)"));
  REQUIRE(s2.kind == ValidVerdict::Valid);
  CHECK(s2.derivation->kind == Derivation::Raa);

  auto ns = decide_r_valid(g.formulas("Gamma"), g.formulas("gamma")[0]);
  CHECK(ns.kind == ValidVerdict::Valid);
  CHECK_FALSE(derive(g.formulas("Gamma"), g.formulas("gamma")[0], rule_set(RuleSetId::R)));
}

TEST_CASE("bounded deciders never claim unsatisfiability") {
  auto premises = Fs({"all(man, animal)"});
  Formula goal = F("all(some(man, kill), some(animal, kill))");
  auto a = decide_star_sat(with_bar(premises, goal), 6);
  CHECK(a.kind == Verdict::Unknown);
  CHECK(a.bound == 6);
  auto v = decide_star_valid(premises, goal, 6);
  CHECK(v.kind == ValidVerdict::Unknown);

  auto w = decide_star_sat(Fs({"some(all(p, r), all(p, r))", "all(p, ~p)"}), 4);
  REQUIRE(w.kind == Verdict::Sat);
  CHECK(w.model->size() == 1);

  auto core = twin_axioms(2);
  core.push_back(bar(twin_gamma()));
  CHECK(decide_star_sat(core, 12).kind == Verdict::Unknown);
}

TEST_CASE("default star bound") {
  auto g = Fs({"all(p, some(p, r))"});
  CHECK(default_star_bound(g, 100) == 18);
  CHECK(default_star_bound(g, 12) == 12);
}

TEST_CASE("dispatch by fragment") {
  CHECK(tightest_fragment(kCarpenter) == Fragment::S);
  CHECK(tightest_fragment(Fs({"all(~p, q)"})) == Fragment::Sd);
  CHECK(decide(kCarpenter).kind == Verdict::Sat);
  CHECK(decide_valid(kCarpenter, F("some(carpenter, ~dentist)")).kind == ValidVerdict::Valid);
}

TEST_CASE("property: S-dagger decider agrees with the oracle") {
  Rng rng(61);
  Signature sig = make_sig({"p", "q", "o"});
  auto pool = all_formulas(sig, Fragment::Sd);
  for (int k = 0; k < 200; ++k) {
    auto theta = random_subset(rng, pool, 0, 5);
    Formula goal = pool[pick(rng, static_cast<int>(pool.size()))];
    auto v = decide_sdagger_valid(theta, goal);
    auto o = oracle_valid(theta, goal, count_existentials(theta) + 2);
    CHECK((v.kind == ValidVerdict::Valid) == o.valid_within_bound);
    if (v.kind == ValidVerdict::Valid)
      CHECK(canonicalize(check_derivation(*v.derivation, rule_set(*parse_ruleset(v.system)), theta)) == goal);
    else CHECK(models(*v.countermodel, with_bar(theta, goal)));
  }
}

TEST_CASE("property: R decider agrees with the oracle") {
  Rng rng(67);
  Signature sig = make_sig({"p", "q"}, {"r"});
  auto pool = all_formulas(sig, Fragment::R);
  for (int k = 0; k < 150; ++k) {
    auto gamma = random_subset(rng, pool, 1, 5);
    auto v = decide_r_sat(gamma);
    WitnessSet B(gamma);
    auto m = find_model(gamma, std::max<int>(1, static_cast<int>(B.elements().size())));
    CHECK((v.kind == Verdict::Sat) == m.found());
    if (v.kind == Verdict::Sat) CHECK(models(*v.model, gamma));
    else CHECK(is_absurdity(check_derivation(*v.refutation, rule_set(RuleSetId::R), gamma)));
  }
}
