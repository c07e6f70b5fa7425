#include <doctest.h>

#include "support.hpp"

using namespace syllo;
using namespace syllo::testing;

TEST_CASE("parse formulas") {
  CHECK(F("all(p, some(q, r))") == All(lit("p"), ex(ulit("q"), blit("r"))));
  CHECK(F("some(~p, all(~q, r))") == Some(lit("p", false), all(ulit("q", false), blit("r"))));
  CHECK(F("  all ( p ,~q )") == All(lit("p"), lit("q", false)));
}

TEST_CASE("parse errors carry position and expectation") {
  try {
    F("all(p q)");
    FAIL("no error");
  } catch (const ParseError &e) {
    CHECK(e.expected == "\",\"");
    CHECK(e.line == 1);
    CHECK(e.column == 7);
  }
  CHECK_THROWS_AS(F("all(p, some(q, r)"), ParseError);
  CHECK_THROWS_AS(F("most(p, q)"), ParseError);
  CHECK_THROWS_AS(F("all(r, some(q, r))"), ParseError);
}

TEST_CASE("printer") {
  CHECK(print_formula(All(lit("p"), lit("q", false))) == "all(p, ~q)");
  CHECK(print_formula(Some(all(ulit("p"), blit("r", false)), lit("q"))) == "some(all(p, ~r), q)");
}

TEST_CASE("gloss") {
  CHECK(gloss(F("all(p, some(q, r))")) == "Every p rs some q");
  CHECK(gloss(F("some(p, all(q, ~r))")) == "Some p rs no q");
  CHECK(gloss(F("all(some(man, kill), some(animal, kill))")) == "Everything which kills a man kills an animal");
  CHECK(gloss(F("all(p, q)")) == "Every p is a q");
  CHECK(gloss(F("some(p, ~q)")) == "Some p is not a q");
}

TEST_CASE("gloss is total over a small signature") {
  Signature sig = make_sig({"p", "q"}, {"r"});
  for (int f = 0; f < kFragmentCount; ++f)
    for (const auto &phi : all_formulas(sig, static_cast<Fragment>(f))) CHECK_FALSE(gloss(phi).empty());
}

TEST_CASE("sequent files") {
  auto s = parse_sequent(
      "# carpenter\n"
      "some(artist, beekeeper)\n"
      "all(artist, carpenter)\n"
      "all(beekeeper, ~dentist)\n"
      "|- some(carpenter, ~dentist)\n");
  CHECK(s.premises.size() == 3);
  REQUIRE(s.conclusion);
  CHECK(*s.conclusion == F("some(carpenter, ~dentist)"));

  auto t = parse_sequent("|- all(p, p)\n");
  CHECK(t.premises.empty());
  CHECK(t.conclusion);

  CHECK_THROWS_AS(parse_sequent("fragment: S\nall(~p, q)\n"), FragmentMismatch);
  auto d = parse_sequent("some(p, q)\nsome(q, p)\n");
  CHECK(d.premises.size() == 1);
  CHECK_THROWS_AS(parse_sequent("all(p, some(q, p))\n"), ParseError);

  auto u = parse_sequent(print_sequent(s));
  CHECK(u.premises == s.premises);
  CHECK(u.conclusion == s.conclusion);
}

TEST_CASE("property: print/parse round trip") {
  Rng rng(5);
  const std::vector<std::string> un = {"p", "q", "o1"}, bi = {"r", "s"};
  for (int k = 0; k < 3000; ++k) {
    Formula phi = random_formula(rng, un, bi);
    CHECK(parse_formula(print_formula(phi)) == phi);
    Formula c = canonicalize(phi);
    CHECK(print_formula(parse_formula(print_formula(c))) == print_formula(c));
  }
}
