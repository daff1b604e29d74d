#include "doctest.h"
#include "gatmonad/substitution.hpp"

#include <set>

using namespace gatmonad;

namespace {

StructurePtr fixture(const char* name) {
  return load_structure(std::string(FIXTURE_DIR) + "/" + name);
}

std::vector<StructurePtr> fixtures() {
  return {fixture("a.json"), fixture("ab.json"), fixture("abt.json"),
          fixture("aab.json"), terminal(3)};
}

std::set<std::string> rendered(const SubstitutionImage& img, int n) {
  std::set<std::string> out;
  const Structure& s = *img.structure();
  for (TypeId t : s.types_at(n)) {
    out.insert(to_string(render_judgement(*img.base(), img.type(t))));
    for (TermId a : s.terms_over(t))
      out.insert(to_string(
          render_term_judgement(*img.base(), img.type(t), img.term(a).term)));
  }
  return out;
}

std::set<std::string> saturated(const Structure& x, int n) {
  auto r = RuleSet::parse("s");
  std::set<std::string> out;
  for (const auto& j : saturate(x, r, default_bounds(x, r, n)).judgements)
    if (j.degree() == n) out.insert(to_string(j));
  return out;
}

}  // namespace

TEST_CASE("S on small fixtures") {
  auto a = apply_S(fixture("a.json"), 4);
  CHECK(a->structure()->types_at(1).size() == 1);
  for (int n = 2; n <= 4; ++n) CHECK(a->structure()->types_at(n).empty());

  auto x = fixture("abt.json");
  auto s = apply_S(x, 3);
  auto level = s->structure()->types_at(1);
  REQUIRE(level.size() == 2);
  CHECK(s->type(level[0]) == unit_S(*x, 0));
  const SType sub{IncList({2}), *x->find_type("B"), {{1, *x->find_term("t")}}};
  CHECK(s->type(level[1]) == sub);
  CHECK(to_string(render_judgement(*x, sub)) == "|- B(t) type");
  CHECK(s->structure()->types_at(2).size() == 1);

  for (const auto& y : fixtures()) {
    auto img = apply_S(y, y->max_degree() + 2);
    for (int n = y->max_degree() + 1; n <= y->max_degree() + 2; ++n)
      CHECK(img->structure()->types_at(n).empty());
  }
}

TEST_CASE("S elements match hom enumeration") {
  for (const auto& x : fixtures()) {
    auto s = apply_S(x, 3);
    for (int n = 1; n <= 3; ++n) {
      std::size_t types = 0, terms = 0;
      for (const auto& a : enumerate_inclists(n, x->max_degree())) {
        types += hom_count(*shape_presheaf(a), *x);
        terms += hom_count(*shape_presheaf_t(a), *x);
      }
      std::size_t got_terms = 0;
      for (TypeId t : s->structure()->types_at(n))
        got_terms += s->structure()->terms_over(t).size();
      CHECK(s->structure()->types_at(n).size() == types);
      CHECK(got_terms == terms);
    }
    for (TypeId t = 0; t < static_cast<TypeId>(s->structure()->type_count()); ++t) {
      CHECK(is_valid(*x, s->type(t)));
      const Structure& st = *s->structure();
      CHECK(st.parse_type(st.type_json(t)) == t);
    }
    const Structure& st = *s->structure();
    for (TermId a = 0; a < static_cast<TermId>(st.term_count()); ++a)
      CHECK(st.parse_term(st.term_json(a)) == a);
  }
}

TEST_CASE("S rendering agrees with the {s} oracle") {
  auto t = terminal(3);
  const SType e{IncList({1, 3}), t->types_at(3)[0], {{2, t->terms_over(t->types_at(2)[0])[0]}}};
  CHECK(to_string(render_judgement(*t, e)) == "x1 : U1 |- U3(x1, u2(x1)) type");
  CHECK(to_string(render_judgement(*t, unit_S(*t, t->types_at(2)[0]))) ==
        "x1 : U1 |- U2(x1) type");
  for (const auto& x : fixtures()) {
    auto s = apply_S(x, 3);
    for (int n = 1; n <= 3; ++n) CHECK(rendered(*s, n) == saturated(*x, n));
  }
}

TEST_CASE("S multiplication") {
  auto x = fixture("abt.json");
  auto s = apply_S(x, 2);
  auto ss = apply_S(s->structure(), 2);
  const TypeId b = *s->find(unit_S(*x, *x->find_type("B")));
  const TypeId a = *s->find(unit_S(*x, *x->find_type("A")));
  const TermId ta = *s->find_term(a, *x->find_term("t"));
  const SType outer{IncList({2}), b, {{1, ta}}};
  const SType want{IncList({2}), *x->find_type("B"), {{1, *x->find_term("t")}}};
  CHECK(mult_S(*s, outer) == want);
  CHECK(ss->find(outer).has_value());
  // α = ι_n gives the inner element back.
  const TypeId sub = *s->find(want);
  CHECK(mult_S(*s, SType{IncList({1}), sub, {}}) == want);
  // Outer gaps are required.
  CHECK_THROWS_AS(mult_S(*s, SType{IncList({1, 2}), sub, {}}), std::invalid_argument);

  for (const auto& y : fixtures()) {
    auto s1 = apply_S(y, 3);
    auto s2 = apply_S(s1->structure(), 3);
    auto s3 = apply_S(s2->structure(), 3);
    auto mu = mult_map(*s2, *s1);
    CHECK_FALSE(mu.defect().has_value());
    CHECK(compose(mu, unit_map(*s2)) == Map::identity(s1->structure()));
    CHECK(compose(mu, fmap(unit_map(*s1), *s1, *s2)) == Map::identity(s1->structure()));
    CHECK(compose(mu, mult_map(*s3, *s2)) == compose(mu, fmap(mu, *s3, *s2)));
  }
}

TEST_CASE("S multiplication uses both gap sources") {
  auto t = terminal(3);
  auto s = apply_S(t, 3);
  const TypeId u3 = t->types_at(3)[0];
  const TermId u1 = t->terms_over(t->types_at(1)[0])[0];
  const TermId u2 = t->terms_over(t->types_at(2)[0])[0];
  // β = (2, 3) with gap 1 ↦ u1, then α = (2) with gap 1 filled by u2's image.
  const SType mid{IncList({2, 3}), u3, {{1, u1}}};
  const TypeId mid_id = *s->find(mid);
  const TypeId bd = s->structure()->boundary(mid_id);
  const TermId k1 = s->structure()->terms_over(bd)[0];
  CHECK(s->term(k1).term == u2);
  const SType got = mult_S(*s, SType{IncList({2}), mid_id, {{1, k1}}});
  CHECK(got == SType{IncList({3}), u3, {{1, u1}, {2, u2}}});
  CHECK(to_string(render_judgement(*t, got)) == "|- U3(u1, u2(u1)) type");
}
