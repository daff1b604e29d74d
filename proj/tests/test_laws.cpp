#include "doctest.h"
#include "gatmonad/laws.hpp"

using namespace gatmonad;

namespace {

StructurePtr fixture(const char* name) {
  return load_structure(std::string(FIXTURE_DIR) + "/" + name);
}

std::vector<StructurePtr> fixtures() {
  return {fixture("a.json"), fixture("ab.json"), fixture("abt.json"),
          fixture("aab.json"), terminal(3)};
}

}  // namespace

TEST_CASE("monad laws for W, P and S") {
  for (const auto& x : fixtures())
    for (MonadKind k : {MonadKind::W, MonadKind::P, MonadKind::S}) {
      const CheckReport r = check_monad_laws(k, x, 4, default_internal(k, *x, 4));
      CHECK_MESSAGE(r.passed, r.text());
      CHECK(r.checked > 0);
    }
}

TEST_CASE("monad laws for T") {
  for (const char* f : {"a.json", "ab.json", "abt.json", "aab.json"}) {
    auto x = fixture(f);
    const CheckReport r = check_monad_laws(MonadKind::T, x, 3, default_internal(MonadKind::T, *x, 3));
    CHECK_MESSAGE(r.passed, r.text());
    CHECK(r.bounds.at("outer") == "linear");
  }
}

TEST_CASE("T laws on linear outer heaps agree with the full enumeration") {
  for (const char* f : {"a.json", "ab.json"}) {
    auto x = fixture(f);
    for (Mutation m : {Mutation::none, Mutation::s_mult_drop_outer_gaps,
                       Mutation::delta_skip_contract, Mutation::p_mult_swap_proj}) {
      const CheckReport linear = check_monad_laws(MonadKind::T, x, 3, 3, m);
      const CheckReport full = check_monad_laws(MonadKind::T, x, 3, 3, m, true);
      CHECK_MESSAGE(linear.passed == full.passed, f, " ", linear.text(), full.text());
    }
  }
}

TEST_CASE("an internal bound below maxdeg breaks the right unit law") {
  const CheckReport r = check_monad_laws(MonadKind::T, terminal(3), 1, 2);
  CHECK_FALSE(r.passed);
  CHECK(r.failure.find("right unit") != std::string::npos);
}

TEST_CASE("law suites detect single-case mutations") {
  auto ab = fixture("ab.json");
  auto abt = fixture("abt.json");
  auto t3 = terminal(3);

  const CheckReport w = check_monad_laws(MonadKind::W, ab, 3, 3, Mutation::w_mult_keeps_outer_heap);
  CHECK_FALSE(w.passed);
  CHECK(w.witness.contains("element"));

  const CheckReport p = check_monad_laws(MonadKind::P, ab, 3, 3, Mutation::p_mult_swap_proj);
  CHECK_FALSE(p.passed);
  CHECK(p.witness.contains("lhs"));

  const CheckReport s = check_monad_laws(MonadKind::S, t3, 3, 3, Mutation::s_mult_drop_outer_gaps);
  CHECK_FALSE(s.passed);

  const CheckReport t = check_monad_laws(MonadKind::T, abt, 3, 3, Mutation::s_mult_drop_outer_gaps);
  CHECK_FALSE(t.passed);

  const CheckReport b = check_beck(ab, 3, 4, Mutation::delta_skip_contract);
  CHECK_FALSE(b.passed);
  CHECK(b.failure.find("δ") != std::string::npos);

  const CheckReport mid = check_middle_unit(abt, 3, Mutation::p_mult_swap_proj);
  CHECK_FALSE(mid.passed);

  const CheckReport c = check_cartesian(MonadKind::W, true, ab, 3, 3, Mutation::w_mult_keeps_outer_heap);
  CHECK_FALSE(c.passed);
}

TEST_CASE("cartesian squares for W, P and S") {
  for (const auto& x : fixtures())
    for (MonadKind k : {MonadKind::W, MonadKind::P, MonadKind::S})
      for (bool mult : {false, true}) {
        const CheckReport r = check_cartesian(k, mult, x, 3, default_internal(k, *x, 3));
        CHECK_MESSAGE(r.passed, r.text());
      }
}

TEST_CASE("the unit of T is cartesian on the fixtures, its multiplication is not") {
  for (const char* f : {"a.json", "ab.json", "abt.json", "aab.json"}) {
    auto x = fixture(f);
    CHECK(check_cartesian(MonadKind::T, false, x, 3, 3).passed);
    CHECK_FALSE(check_cartesian(MonadKind::T, true, x, 1, 2).passed);
  }
}

TEST_CASE("μ^T counterexample") {
  const CheckReport r = counterexample_T();
  CHECK_MESSAGE(r.passed, r.text());
  CHECK(r.failure.find("linearity") != std::string::npos);
  const Json& y = r.witness.at("y");
  CHECK(y.at("heap") == Json::array({0}));
  CHECK(y.at("nodes").at(0).at("inc") == Json::array({2}));
  CHECK(y.at("nodes").at(0).at("head").at("heap") == Json::array({0, 0}));
  CHECK(r.witness.at("preimages") == 0);
  // Larger internal bounds find the same witness.
  CHECK(counterexample_T(3).passed);
}

TEST_CASE("μ^T square once terms exist over A") {
  // One term: the fibre over the counterexample pair is inhabited by the
  // element substituting t, and at degree 1 every fibre has one element.
  auto one = make_structure(StructureDecl{{TypeDecl{"A", 1, std::nullopt}},
                                          {TermDecl{"t", "A"}}});
  const CheckReport r1 = check_cartesian(MonadKind::T, true, one, 1, 2);
  CHECK_MESSAGE(r1.passed, r1.text());

  auto two = make_structure(StructureDecl{{TypeDecl{"A", 1, std::nullopt}},
                                          {TermDecl{"t", "A"}, TermDecl{"u", "A"}}});
  const CheckReport r2 = check_cartesian(MonadKind::T, true, two, 1, 2);
  CHECK_FALSE(r2.passed);
  // Same fibre pair as the counterexample, now with one preimage per term.
  CHECK(r2.witness.at("preimages") == 2);
  CHECK(r2.witness.at("y").at("nodes").at(0).at("inc") == Json::array({2}));
}

TEST_CASE("Beck axioms and the middle unit law") {
  // terminal(3) at the full internal bound runs in the acceptance binary.
  for (const char* f : {"a.json", "ab.json", "abt.json", "aab.json"}) {
    auto x = fixture(f);
    const CheckReport b = check_beck(x, 3, x->max_degree() + 3);
    CHECK_MESSAGE(b.passed, b.text());
    const CheckReport m = check_middle_unit(x, 3);
    CHECK_MESSAGE(m.passed, m.text());
  }
  CHECK(check_beck(terminal(3), 3, 4).passed);
  CHECK(check_middle_unit(terminal(3), 3).passed);
}

TEST_CASE("pullback preservation") {
  auto a = fixture("a.json");
  auto abx = fixture("abx.json");
  auto ac = fixture("ac.json");
  auto ab = fixture("ab.json");
  auto abt = fixture("abt.json");
  auto aab = fixture("aab.json");
  auto t3 = terminal(3);
  const Map left = map_by_name(abx, a, {{"B", "A"}});
  const Map right = map_by_name(ac, a, {{"C", "A"}});
  for (MonadKind k : {MonadKind::W, MonadKind::P, MonadKind::S, MonadKind::T}) {
    const CheckReport r = check_pullback_preservation(k, left, right, 3);
    CHECK_MESSAGE(r.passed, r.text());
    const Map id = Map::identity(ab);
    CHECK(check_pullback_preservation(k, id, id, 3).passed);
  }
  for (MonadKind k : {MonadKind::W, MonadKind::P, MonadKind::S}) {
    const CheckReport r = check_pullback_preservation(k, bang(abt, t3), bang(aab, t3), 3);
    CHECK_MESSAGE(r.passed, r.text());
  }
}

TEST_CASE("a square that is not a pullback is reported") {
  // The diagonal-free square abx ×_a ac with its apex swapped for a single
  // copy of A commutes but misses fibre pairs.
  auto a = fixture("a.json");
  auto abx = fixture("abx.json");
  auto ac = fixture("ac.json");
  const Map left = map_by_name(abx, a, {{"B", "A"}});
  const Map right = map_by_name(ac, a, {{"C", "A"}});
  const Map pl = map_by_name(a, abx);
  const Map pr = map_by_name(a, ac);
  const SquareCheck c = check_pullback(pl, pr, left, right);
  CHECK(c.status == SquareCheck::Status::not_pullback);
  CHECK(c.preimages == 0);
}

TEST_CASE("oracle agreement") {
  for (const auto& x : fixtures())
    for (const char* rules : {"none", "w", "wp", "s", "ws"}) {
      const CheckReport r = check_oracle(x, RuleSet::parse(rules), 4);
      CHECK_MESSAGE(r.passed, r.text());
    }
  for (const char* f : {"a.json", "ab.json", "abt.json", "aab.json"}) {
    const CheckReport r = check_oracle(fixture(f), RuleSet::parse("wps"), 4);
    CHECK_MESSAGE(r.passed, r.text());
  }
}

TEST_CASE("oracle suite rejects the image of a different rule set") {
  auto abt = fixture("abt.json");
  const CheckReport r = check_oracle(abt, RuleSet::parse("wp"), 3, RuleSet::parse("w"));
  CHECK_FALSE(r.passed);
  CHECK(r.failure == "derived judgement missing from the image");
  const CheckReport s = check_oracle(abt, RuleSet::parse("w"), 3, RuleSet::parse("ws"));
  CHECK_FALSE(s.passed);
  CHECK(s.failure == "image judgement not derived by the oracle");
}

TEST_CASE("reports") {
  const CheckReport r = check_monad_laws(MonadKind::W, fixture("a.json"), 2, 2);
  const Json j = r.to_json();
  CHECK(j.at("suite") == "monad-laws");
  CHECK(j.at("bounds") == Json({{"N", 2}, {"internal", 2}}));
  CHECK(r.text() == check_monad_laws(MonadKind::W, fixture("a.json"), 2, 2).text());
  CHECK(parse_monad("t") == MonadKind::T);
  CHECK_THROWS(parse_monad("q"));
  CHECK(default_internal(MonadKind::T, *terminal(3), 2) == 3);
}
