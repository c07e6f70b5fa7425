#include <doctest.h>

#include "support.hpp"
#include "syllo/fixtures.hpp"

using namespace syllo;
using namespace syllo::testing;

namespace {

std::set<Formula> as_set(const std::vector<Formula> &v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("bundles verify") {
  for (int n = 2; n <= 5; ++n) CHECK_NOTHROW(gamma_fixture(n).verify());
  CHECK_NOTHROW(twin_fixture(3).verify());
  CHECK_NOTHROW(twin_fixture(4, 2).verify());
  CHECK_THROWS(gamma_fixture(4).structure("nope"));
}

TEST_CASE("gamma star") {
  for (int n = 2; n <= 6; ++n) {
    auto g = gamma_star_fixture(n);
    CHECK(g.gamma.size() >= static_cast<size_t>(n));
    for (const auto &f : g.gamma) CHECK(in_fragment(f, Fragment::R));
    CHECK(in_fragment(g.goal, Fragment::R));
  }
}

TEST_CASE("every non-member of Gamma has a countermodel among the Delta models") {
  const int n = 4;
  auto g = gamma_fixture(n);
  Signature sig;
  for (int k = 1; k <= n; ++k) sig.unaries.insert(chain_atom(k));
  sig.binaries.insert("r");
  auto gamma = as_set(g.formulas("Gamma"));
  std::set<Formula> canon;
  for (const auto &f : gamma) canon.insert(canonicalize(f));
  std::set<int> cases;
  int checked = 0;
  for (int i = 1; i < n; ++i) {
    auto delta = g.formulas("Delta" + std::to_string(i));
    for (const auto &phi : all_formulas(sig, Fragment::R)) {
      auto cm = gap_countermodel(n, i, phi);
      if (canon.count(phi)) {
        CHECK_FALSE(cm);
        continue;
      }
      REQUIRE(cm);
      cases.insert(cm->case_no);
      CHECK(models(cm->model, delta));
      CHECK_FALSE(satisfies(cm->model, phi).holds);
      ++checked;
    }
  }
  CHECK(checked > 0);
  CHECK(cases.size() >= 5);
}

TEST_CASE("chain countermodels") {
  auto A = gap_A(4, 2);
  CHECK_FALSE(satisfies(A, F("all(p2, some(p3, r))")).holds);
  CHECK(satisfies(A, F("all(p1, all(p4, r))")).holds);
  auto C = gap_C(4, 2);
  CHECK_FALSE(satisfies(C, F("all(p1, some(p4, r))")).holds);
  auto Z = gap_A0(4);
  CHECK(Z.size() == 1);
  CHECK_FALSE(satisfies(Z, F("some(p1, p1)")).holds);
}

TEST_CASE("the large construction") {
  for (int n = 2; n <= 6; ++n) CHECK(models(twin_A(n), twin_axioms(n)));
  for (int n = 2; n <= 3; ++n) {
    Signature sig = twin_signature(n);
    Formula g = canonicalize(twin_gamma()), d = canonicalize(twin_delta(1));
    auto thA = as_set(theory(twin_A(n), Fragment::Rsd, sig));
    auto thB = as_set(theory(twin_B(n, 1), Fragment::Rsd, sig));
    CHECK(thA.count(g));
    CHECK(thA.count(d));
    auto expect = thA;
    expect.erase(g);
    expect.erase(d);
    expect.insert(canonicalize(bar(twin_gamma())));
    expect.insert(canonicalize(bar(twin_delta(1))));
    CHECK(thB == expect);
  }
}

TEST_CASE("B_i agrees with A except at gamma and delta_i") {
  const int n = 4;
  auto A = twin_A(n);
  auto B2 = twin_B(n, 2), B3 = twin_B(n, 3);
  CHECK_FALSE(satisfies(B2, twin_delta(2)).holds);
  CHECK(satisfies(B2, twin_delta(3)).holds);
  CHECK_FALSE(satisfies(B3, twin_delta(3)).holds);
  CHECK(satisfies(B3, twin_delta(2)).holds);
  CHECK_FALSE(satisfies(B2, twin_gamma()).holds);
  CHECK(satisfies(A, twin_delta(2)).holds);
}

TEST_CASE("modal formulas") {
  auto phi = parse_ku("and(p,not(box(p)))");
  CHECK(print_ku(*phi) == "and(p,not(box(p)))");
  CHECK(ku_depth(*phi) == 3);
  CHECK(ku_enumerate("p", 2).size() == 41);

  auto contra = KuFormula::conj(KuFormula::prop("p"), KuFormula::neg(KuFormula::prop("p")));
  CHECK_FALSE(kripke_model(*contra, 3));
  auto t = ku_translate(*contra);
  for (const auto &f : t) CHECK(in_fragment(f, Fragment::Rd));
  CHECK_FALSE(find_model(t, 6).found());

  auto box = KuFormula::box(KuFormula::prop("p"));
  CHECK(kripke_model(*box, 3));
  auto tr = ku_translate_full(*box);
  auto m = find_model(tr.formulas, 4);
  REQUIRE(m.found());
  auto K = kripke_from_structure(*m.model, tr, *box);
  bool somewhere = false;
  for (int w = 0; w < K.worlds; ++w) somewhere |= kripke_holds(K, *box, w);
  CHECK(somewhere);
}

TEST_CASE("modal translation is equisatisfiable on small formulas") {
  for (const auto &phi : ku_enumerate("p", 2)) {
    bool k = kripke_model(*phi, 3).has_value();
    auto tr = ku_translate_full(*phi);
    auto m = find_model(tr.formulas, 8);
    CHECK_MESSAGE(k == m.found(), print_ku(*phi));
  }
}
