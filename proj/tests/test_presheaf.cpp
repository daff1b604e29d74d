#include "doctest.h"
#include "gatmonad/heap.hpp"
#include "gatmonad/presheaf.hpp"

#include <set>

using namespace gatmonad;

namespace {

StructureDecl decl(std::vector<TypeDecl> types, std::vector<TermDecl> terms = {}) {
  return {std::move(types), std::move(terms)};
}

StructurePtr fixture(const char* name) {
  return load_structure(std::string(FIXTURE_DIR) + "/" + name);
}

// Independent count of assignments: every function from source elements to
// target elements, filtered by the naturality conditions.
std::size_t brute_hom_count(const Structure& a, const Structure& x) {
  std::size_t count = 0;
  const std::size_t na = a.type_count(), ma = a.term_count();
  std::vector<int> ty(na, 0), tm(ma, 0);
  const int nx = static_cast<int>(x.type_count());
  const int mx = static_cast<int>(x.term_count());
  if ((na > 0 && nx == 0) || (ma > 0 && mx == 0)) return 0;
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < na && ok; ++i) {
      const auto t = static_cast<TypeId>(i);
      ok = x.degree(ty[i]) == a.degree(t) &&
           (a.boundary(t) == kNone || x.boundary(ty[i]) == ty[a.boundary(t)]);
    }
    for (std::size_t k = 0; k < ma && ok; ++k)
      ok = x.term_type(tm[k]) == ty[a.term_type(static_cast<TermId>(k))];
    if (ok) ++count;
    std::size_t i = 0;
    for (; i < na + ma; ++i) {
      int& d = i < na ? ty[i] : tm[i - na];
      const int limit = i < na ? nx : mx;
      if (++d < limit) break;
      d = 0;
    }
    if (i == na + ma) break;
  }
  return count;
}

}  // namespace

TEST_CASE("validation reports each violation") {
  CHECK(validate(decl({{"A", 1, {}}, {"B", 2, "A"}})).empty());
  auto v = validate(decl({{"A", 1, {}}, {"B", 3, "A"}}));
  REQUIRE(v.size() == 1);
  CHECK(v[0].message == "boundary degree mismatch at B");
  v = validate(decl({{"A", 1, {}}}, {{"t", "A"}, {"t", "A"}}));
  REQUIRE(v.size() == 1);
  CHECK(v[0].message == "duplicate term name t");
  v = validate(decl({{"A", 1, {}}, {"A", 1, {}}, {"B", 2, "C"}}, {{"s", "D"}}));
  CHECK(v.size() == 3);
  CHECK(validate(decl({{"x1", 1, {}}})).size() == 1);
  CHECK_THROWS_AS(fixture("bad_degree.json"), std::invalid_argument);
}

TEST_CASE("structure files round trip") {
  auto x = fixture("abt.json");
  CHECK(x->max_degree() == 2);
  CHECK(x->types_at(1).size() == 1);
  auto y = make_structure(parse_structure_json(structure_to_json(*x)));
  CHECK(structure_to_json(*y) == structure_to_json(*x));
  auto aab = fixture("aab.json");
  CHECK(aab->find_type("A'").has_value());
}

TEST_CASE("terminal structures") {
  auto t1 = terminal(1);
  CHECK(t1->type_count() == 1);
  CHECK(t1->term_count() == 1);
  auto t3 = terminal(3);
  CHECK(t3->type_count() == 3);
  CHECK(t3->boundary(2) == 1);
  for (const char* f : {"a.json", "ab.json", "abt.json", "aab.json"}) {
    auto x = fixture(f);
    auto t = terminal(x->max_degree());
    CHECK(hom_enumerate(x, t).size() == 1);
    CHECK(hom_enumerate(x, t)[0] == bang(x, t));
  }
}

TEST_CASE("hom enumeration is complete and duplicate free") {
  auto a = fixture("a.json");
  CHECK(hom_enumerate(shape_presheaf(Heap::linear(2)), a).empty());
  CHECK(hom_enumerate(shape_presheaf(Heap({0, 0})), a).size() == 1);

  std::vector<StructurePtr> targets = {fixture("a.json"), fixture("ab.json"),
                                       fixture("abt.json"), fixture("aab.json"),
                                       terminal(3)};
  for (const auto& x : targets) {
    for (int n = 1; n <= x->max_degree(); ++n)
      CHECK(hom_enumerate(representable(n), x).size() == x->types_at(n).size());
    for (int n = 1; n <= 3; ++n) {
      for (const auto& h : enumerate_heaps(n)) {
        for (auto shape : {shape_presheaf(h), shape_presheaf_t(h)}) {
          auto homs = hom_enumerate(shape, x);
          CHECK(homs.size() == brute_hom_count(*shape, *x));
          CHECK(homs.size() == hom_count(*shape, *x));
          std::set<std::pair<std::vector<TypeId>, std::vector<TermId>>> seen;
          for (const auto& m : homs) {
            CHECK_FALSE(m.defect().has_value());
            seen.insert({m.type_assignment(), m.term_assignment()});
          }
          CHECK(seen.size() == homs.size());
          // Lexicographic order.
          for (std::size_t i = 1; i < homs.size(); ++i)
            CHECK(std::make_pair(homs[i - 1].type_assignment(),
                                 homs[i - 1].term_assignment()) <
                  std::make_pair(homs[i].type_assignment(),
                                 homs[i].term_assignment()));
        }
      }
    }
  }
}

TEST_CASE("pullback squares") {
  auto x = fixture("aab.json");
  auto id = Map::identity(x);
  CHECK(is_pullback(id, id, id, id));

  // Product over the terminal.
  auto a = fixture("ab.json");
  auto t = terminal(2);
  auto prod = fibre_product(bang(a, t), bang(x, t));
  CHECK(is_pullback(prod.left, prod.right, bang(a, t), bang(x, t)));
  CHECK(is_pullback(prod.right, prod.left, bang(x, t), bang(a, t)));
  // |P(1)| = 1 * 2, |P(2)| = 1 * 1.
  CHECK(prod.apex->types_at(1).size() == 2);
  CHECK(prod.apex->types_at(2).size() == 1);

  // Dropping an element of the apex breaks the bijection.
  auto tt = terminal(1);
  auto two = fixture("abx.json");
  auto one = fixture("a.json");
  auto collapse = Map::checked(two, one, {0, 0}, {});
  auto sq = check_pullback(Map::identity(one), Map::identity(one), bang(one, tt),
                           bang(one, tt));
  CHECK(sq.ok());
  auto bad = check_pullback(collapse, collapse, Map::identity(one),
                            Map::identity(one));
  CHECK(bad.status == SquareCheck::Status::not_pullback);
  CHECK(bad.preimages == 2);

  // Non-commuting squares are errors.
  auto ab2 = fixture("abx.json");
  auto left = Map::checked(one, ab2, {0}, {});
  auto right = Map::checked(one, ab2, {1}, {});
  CHECK_THROWS_AS(is_pullback(Map::identity(one), Map::identity(one), left, right),
                  std::invalid_argument);
}
