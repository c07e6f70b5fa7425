#include <doctest.h>

#include "support.hpp"

using namespace syllo;
using namespace syllo::testing;

namespace {

FragmentSet tags(std::initializer_list<Fragment> fs) {
  FragmentSet s;
  for (auto f : fs) s.add(f);
  return s;
}

const std::vector<std::string> kUn = {"p", "q", "o"};
const std::vector<std::string> kBi = {"r", "s"};

}  // namespace

TEST_CASE("complement of terms") {
  CHECK(complement(all(ulit("q"), blit("r"))) == ex(ulit("q"), blit("r", false)));
  CHECK(complement(lit("p")) == lit("p", false));
  CHECK(complement(lit("p", false)) == lit("p"));
  ETerm e = ex(ulit("p", false), blit("s", false));
  CHECK(complement(complement(e)) == e);
}

TEST_CASE("bar") {
  CHECK(bar(F("all(p, some(q, r))")) == F("some(p, all(q, ~r))"));
  CHECK(bar(bar(F("some(p, q)"))) == F("some(p, q)"));
  CHECK(bar(F("all(o1, some(~q2, r))")) == F("some(o1, all(~q2, ~r))"));
}

TEST_CASE("canonical representatives") {
  CHECK(canonicalize(F("some(q, p)")) == F("some(p, q)"));
  CHECK(canonicalize(F("all(~q, ~p)")) == F("all(p, q)"));
  Formula c = canonicalize(F("all(p, some(q, r))"));
  CHECK(canonicalize(c) == c);
  CHECK(is_canonical(c));
}

TEST_CASE("classification follows the grammar") {
  using enum Fragment;
  CHECK(classify(F("some(p, ~q)")) == tags({S, Sd, R, Rd, Rs, Rsd}));
  CHECK(classify(F("some(~p, all(~q, r))")) == tags({Rd, Rsd}));
  CHECK(classify(F("all(some(man, kill), some(animal, kill))")) == tags({Rs, Rsd}));
  CHECK(classify(F("all(~p, q)")) == tags({Sd, Rd, Rsd}));
  CHECK(classify(F("all(p, some(q, r))")) == tags({R, Rd, Rs, Rsd}));
}

TEST_CASE("absurdities") {
  CHECK(is_absurdity(F("some(p, ~p)")));
  CHECK_FALSE(is_absurdity(F("some(p, p)")));
  CHECK(is_absurdity(F("some(all(q, r), some(q, ~r))")));
  CHECK(is_absurdity(F("some(~p, p)")));
}

TEST_CASE("atoms") {
  auto s = atoms(F("all(p, some(q, r))"));
  CHECK(s.unaries == std::set<std::string>{"p", "q"});
  CHECK(s.binaries == std::set<std::string>{"r"});
  auto t = atoms(F("some(p, ~q)"));
  CHECK(t.unaries == std::set<std::string>{"p", "q"});
  CHECK(t.binaries.empty());
  auto g = atoms(F("all(o1, some(~q2, r))"));
  CHECK(g.unaries == std::set<std::string>{"o1", "q2"});
  CHECK(g.binaries == std::set<std::string>{"r"});
}

TEST_CASE("namespace clash") {
  Signature s;
  s.unaries = {"p"};
  s.binaries = {"p"};
  CHECK_THROWS_AS(check_namespaces(s), NamespaceError);
}

TEST_CASE("property: involutions, idempotence, bar-closure, inclusions") {
  Rng rng(11);
  for (int k = 0; k < 3000; ++k) {
    Formula phi = random_formula(rng, kUn, kBi);
    CHECK(complement(complement(phi.left)) == phi.left);
    CHECK(bar(bar(phi)) == phi);
    Formula c = canonicalize(phi);
    CHECK(canonicalize(c) == c);
    for (const auto &rep : representatives(phi)) CHECK(canonicalize(rep) == c);
    FragmentSet fs = classify(phi), fb = classify(bar(phi));
    CHECK(fs == fb);
    using enum Fragment;
    if (fs.has(S)) CHECK((fs.has(R) && fs.has(Sd)));
    if (fs.has(R)) CHECK((fs.has(Rs) && fs.has(Rd)));
    if (fs.has(Sd)) CHECK(fs.has(Rd));
    if (fs.has(Rs)) CHECK(fs.has(Rsd));
    if (fs.has(Rd)) CHECK(fs.has(Rsd));
  }
}

TEST_CASE("formula enumeration is canonical and fragment-closed") {
  Signature sig = make_sig({"p", "q"}, {"r"});
  for (int f = 0; f < kFragmentCount; ++f) {
    auto frag = static_cast<Fragment>(f);
    auto all_f = all_formulas(sig, frag);
    std::set<Formula> set(all_f.begin(), all_f.end());
    CHECK(set.size() == all_f.size());
    for (const auto &phi : all_f) {
      CHECK(is_canonical(phi));
      CHECK(in_fragment(phi, frag));
      CHECK(set.count(canonicalize(bar(phi))) == 1);
    }
  }
}
