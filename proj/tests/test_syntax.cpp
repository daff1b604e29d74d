#include "doctest.h"
#include "gatmonad/syntax.hpp"

#include <algorithm>
#include <set>

using namespace gatmonad;

namespace {

StructurePtr fixture(const char* name) {
  return load_structure(std::string(FIXTURE_DIR) + "/" + name);
}

Judgement J(const char* text) { return parse_judgement(text); }

std::set<std::string> texts(const std::vector<Judgement>& js) {
  std::set<std::string> out;
  for (const auto& j : js) out.insert(to_string(j));
  return out;
}

std::size_t count_form(const std::vector<Judgement>& js, Form f, int degree) {
  return std::count_if(js.begin(), js.end(), [&](const Judgement& j) {
    return j.form == f && j.degree() == degree;
  });
}

// Naive closure: apply every rule to every tuple of known judgements until
// nothing new appears. Independent of the indexed engine's bookkeeping.
std::set<std::string> naive_closure(const Structure& x, const RuleSet& rules,
                                    int max_degree) {
  std::vector<Judgement> all = basic_judgements(x);
  std::set<std::string> seen = texts(all);
  bool changed = true;
  auto add = [&](const Judgement& j) {
    if (j.degree() > max_degree) return;
    if (seen.insert(to_string(j)).second) {
      all.push_back(j);
      changed = true;
    }
  };
  while (changed) {
    changed = false;
    const auto snapshot = all;
    for (const auto& a : snapshot) {
      if (rules.projection && a.form == Form::type) add(apply_rule(Rule::project, {a}));
      for (const auto& b : snapshot) {
        for (int p = 0; p <= static_cast<int>(b.context.size()); ++p) {
          if (rules.weakening) {
            try {
              add(apply_rule(Rule::weaken, {a, b}, p));
            } catch (const RuleError&) {
            }
          }
          if (rules.substitution) {
            try {
              add(apply_rule(Rule::subst, {a, b}, p));
            } catch (const RuleError&) {
            }
          }
        }
      }
    }
  }
  std::set<std::string> out;
  for (const auto& j : all)
    if (j.degree() <= max_degree) out.insert(to_string(j));
  return out;
}

}  // namespace

TEST_CASE("expressions") {
  auto x = Expression::variable("x");
  auto y = Expression::variable("y");
  auto t = Expression::apply("t");
  CHECK(substitute(x, t, "x") == t);
  CHECK(substitute(Expression::apply("B", {x, y}), t, "x") ==
        Expression::apply("B", {t, y}));
  auto e = Expression::apply("c", {x, Expression::apply("i", {x}), Expression::apply("d")});
  CHECK(free_vars(e) == std::set<std::string>{"x"});
  CHECK(to_string(e) == "c(x, i(x), d)");
  CHECK(e.depth() == 3);
  CHECK(canonical_index("x12") == 12);
  CHECK(canonical_index("x") == 0);
  CHECK(canonical_index("x01") == 0);
}

TEST_CASE("judgement grammar round trips") {
  for (const char* s : {"|- A type", "x1 : A |- B(x1) type", "|- t : A",
                        "x1 : A, x2 : B(x1) |- C(x1, x2) type",
                        "x1 : A |- A = A type", "x1 : A |- x1 = x1 : A"}) {
    CHECK(to_string(J(s)) == s);
  }
  CHECK(to_string(J("⊢ A type")) == "|- A type");
  CHECK(J("y : A |- y : A").subject.is_variable());
  CHECK_FALSE(J("|- y : A").subject.is_variable());
  CHECK_THROWS_AS(J("|- A"), std::invalid_argument);
  CHECK_THROWS_AS(J("x1 : A |- B(x1) type extra"), std::invalid_argument);
  CHECK_THROWS_AS(J("|- A ; type"), std::invalid_argument);
}

TEST_CASE("boundaries") {
  CHECK(boundary(J("|- A type")).empty());
  auto b = boundary(J("x : A |- t : B(x)"));
  REQUIRE(b.size() == 1);
  CHECK(to_string(b[0]) == "x : A |- B(x) type");
  b = boundary(J("x : A, y : B(x) |- C(x, y) type"));
  REQUIRE(b.size() == 1);
  CHECK(to_string(b[0]) == "x : A |- B(x) type");
  b = boundary(J("x : A |- B(x) = C(x) type"));
  REQUIRE(b.size() == 2);
  CHECK(to_string(b[1]) == "x : A |- C(x) type");
  b = boundary(J("|- s = t : A"));
  REQUIRE(b.size() == 2);
  CHECK(to_string(b[0]) == "|- s : A");
}

TEST_CASE("alpha canonical forms") {
  CHECK(to_string(alpha_canonical(J("y : A |- y : A"))) == "x1 : A |- x1 : A");
  auto c = alpha_canonical(J("x1 : A, x2 : B(x1) |- C(x1, x2) type"));
  CHECK(alpha_canonical(c) == c);
  // Swapped names map to the same representative.
  CHECK(alpha_canonical(J("x2 : A, x1 : B(x2) |- C(x2, x1) type")) == c);
  CHECK(alpha_canonical(J("x1 : A |- A type")) !=
        alpha_canonical(J("x1 : A |- B(x1) type")));
  Judgement free = Judgement::type_judgement(
      {}, Expression::apply("B", {Expression::variable("z")}));
  CHECK_THROWS_AS(alpha_canonical(free), std::invalid_argument);
}

TEST_CASE("rule applications") {
  CHECK(to_string(apply_rule(Rule::weaken, {J("|- A type"), J("|- A type")}, 0)) ==
        "x1 : A |- A type");
  CHECK(to_string(apply_rule(Rule::project, {J("|- A type")})) == "x1 : A |- x1 : A");
  CHECK(to_string(apply_rule(Rule::subst, {J("|- t : A"), J("x1 : A |- B(x1) type")}, 0)) ==
        "|- B(t) type");
  // Weakening in the middle shifts later variables.
  CHECK(to_string(apply_rule(Rule::weaken,
                             {J("x1 : A |- A type"), J("x1 : A, x2 : B(x1) |- B(x2) type")},
                             1)) == "x1 : A, x2 : A, x3 : B(x1) |- B(x3) type");
  // Substitution in the middle shifts later variables down.
  CHECK(to_string(apply_rule(Rule::subst,
                             {J("x1 : A |- f(x1) : A"),
                              J("x1 : A, x2 : A, x3 : B(x2) |- c(x1, x3) : C(x2)")},
                             1)) == "x1 : A, x2 : B(f(x1)) |- c(x1, x2) : C(f(x1))");

  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const RuleError& e) {
      return e.kind();
    }
    FAIL("no error");
    return RuleError::Kind::shape_mismatch;
  };
  CHECK(kind([] { apply_rule(Rule::project, {J("|- t : A")}); }) ==
        RuleError::Kind::shape_mismatch);
  CHECK(kind([] { apply_rule(Rule::project, {}); }) == RuleError::Kind::shape_mismatch);
  CHECK(kind([] {
          apply_rule(Rule::subst, {J("|- t : A"), J("x1 : C |- B(x1) type")}, 0);
        }) == RuleError::Kind::side_condition);
  CHECK(kind([] { apply_rule(Rule::weaken, {J("x1 : C |- A type"), J("x1 : A |- A type")}, 1); }) ==
        RuleError::Kind::side_condition);
  CHECK(kind([] { apply_rule(Rule::weaken, {J("|- A type"), J("|- A type")}, 1); }) ==
        RuleError::Kind::side_condition);

  CHECK(to_string(apply_rule(Rule::refl_term, {J("|- t : A")})) == "|- t = t : A");
  CHECK(to_string(apply_rule(Rule::sym_type, {J("|- A = C type")})) == "|- C = A type");
  CHECK(to_string(apply_rule(Rule::trans_type, {J("|- A = C type"), J("|- C = D type")})) ==
        "|- A = D type");
  CHECK(to_string(apply_rule(Rule::conv_term, {J("|- A = C type"), J("|- t : A")})) ==
        "|- t : C");
  CHECK(to_string(apply_rule(Rule::subst_eq_type,
                             {J("|- s = t : A"), J("x1 : A |- B(x1) type")}, 0)) ==
        "|- B(s) = B(t) type");
  CHECK(to_string(apply_rule(Rule::subst_eq_term,
                             {J("|- s = t : A"), J("x1 : A, x2 : B(x1) |- c(x2) : C(x1)")},
                             0)) == "x1 : B(t) |- c(x1) = c(x1) : C(t)");
}

TEST_CASE("basic judgements") {
  CHECK(texts(basic_judgements(*fixture("a.json"))) == std::set<std::string>{"|- A type"});
  CHECK(texts(basic_judgements(*fixture("ab.json"))) ==
        std::set<std::string>{"|- A type", "x1 : A |- B(x1) type"});
  CHECK(texts(basic_judgements(*fixture("abt.json"))) ==
        std::set<std::string>{"|- A type", "x1 : A |- B(x1) type", "|- t : A"});
  CHECK(texts(basic_judgements(*terminal(3))).count(
            "x1 : U1, x2 : U2(x1) |- u3(x1, x2) : U3(x1, x2)") == 1);
}

TEST_CASE("saturation") {
  auto a = fixture("a.json");
  for (const char* f : {"a.json", "ab.json", "abt.json", "aab.json", "terminal3.json"}) {
    auto x = fixture(f);
    auto r = saturate(*x, RuleSet::parse("none"), {5, 5, 4});
    CHECK(texts(r.judgements) == texts(basic_judgements(*x)));
  }
  auto w = saturate(*a, RuleSet::parse("w"), {3, 3, 2}).judgements;
  CHECK(w.size() == 3);
  CHECK(count_form(w, Form::term, 3) == 0);

  auto wp = saturate(*a, RuleSet::parse("wp"), {2, 2, 2}).judgements;
  CHECK(texts(wp) == std::set<std::string>{"|- A type", "x1 : A |- A type",
                                           "x1 : A |- x1 : A"});

  auto s = saturate(*fixture("abt.json"), RuleSet::parse("s"), {2, 2, 3}).judgements;
  CHECK(texts(s) == std::set<std::string>{"|- A type", "x1 : A |- B(x1) type",
                                          "|- t : A", "|- B(t) type"});

  CHECK_THROWS_AS(saturate(*a, RuleSet::parse("p"), {2, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(saturate(*a, RuleSet::parse("w"), {3, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(RuleSet::parse("wq"), std::invalid_argument);
}

TEST_CASE("saturation agrees with naive closure") {
  for (const char* f : {"a.json", "ab.json", "abt.json", "aab.json"}) {
    auto x = fixture(f);
    for (const char* d : {"w", "wp", "s", "ws", "wps"}) {
      CAPTURE(f);
      CAPTURE(d);
      auto rules = RuleSet::parse(d);
      auto sat = saturate(*x, rules, {3, 3, 4});
      CHECK(texts(sat.judgements) == naive_closure(*x, rules, 3));
    }
  }
}

TEST_CASE("saturation is monotone in its bounds") {
  auto x = fixture("abt.json");
  auto rules = RuleSet::parse("wps");
  auto small = texts(saturate(*x, rules, {2, 3, 3}).judgements);
  auto big = texts(saturate(*x, rules, {3, 4, 3}).judgements);
  CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
}

TEST_CASE("expression depth overflow names a frontier judgement") {
  auto x = fixture("abt.json");
  try {
    saturate(*x, RuleSet::parse("s"), {2, 2, 1});
    FAIL("expected overflow");
  } catch (const BoundOverflow& e) {
    CHECK(e.frontier().degree() <= 2);
  }
}

TEST_CASE("equality rules only produce reflexivity on free theories") {
  for (const char* f : {"a.json", "abt.json"}) {
    auto x = fixture(f);
    RuleSet rules = RuleSet::parse("wps");
    rules.equality = true;
    auto all = saturate(*x, rules, {2, 2, 3}).judgements;
    auto plain = saturate(*x, RuleSet::parse("wps"), {2, 2, 3}).judgements;
    std::size_t eqs = 0;
    for (const auto& j : all) {
      if (j.form == Form::type_eq || j.form == Form::term_eq) {
        ++eqs;
        CHECK(j.subject == j.other);
      }
    }
    CHECK(eqs > 0);
    CHECK(all.size() == plain.size() + eqs);
  }
}
