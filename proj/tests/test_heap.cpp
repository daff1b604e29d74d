#include "doctest.h"
#include "gatmonad/heap.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace gatmonad;

namespace {

const Heap kExample({0, 1, 0, 2, 2, 3, 1, 6});

// Forest-level oracle for strip: keep every other node, relabel by rank.
Heap strip_by_forest(const Heap& h, int m) {
  std::map<int, int> rank;
  int next = 1;
  for (int i = 1; i <= h.size(); ++i)
    if (i != m) rank[i] = next++;
  std::vector<int> p;
  for (int i = 1; i <= h.size(); ++i) {
    if (i == m) continue;
    const int q = h.parent(i);
    p.push_back(q == 0 ? 0 : rank.at(q));
  }
  return Heap(p);
}

// All compatible families over ψ, built node by node.
void families(const Heap& psi, std::size_t i, std::vector<Heap>& cur,
              std::vector<std::vector<Heap>>& out) {
  if (i == static_cast<std::size_t>(psi.size())) {
    out.push_back(cur);
    return;
  }
  const int node = static_cast<int>(i) + 1;
  const int d = depth(psi, node);
  for (const auto& f : enumerate_heaps(d)) {
    const int par = psi.parent(node);
    if (par > 0 && boundary(f) != cur[par - 1]) continue;
    cur.push_back(f);
    families(psi, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TEST_CASE("heap construction") {
  CHECK_THROWS_AS(Heap({1}), std::invalid_argument);
  CHECK_THROWS_AS(Heap({0, 2}), std::invalid_argument);
  CHECK(Heap::linear(3).parents() == std::vector<int>{0, 1, 2});
  CHECK(parse_heap("0,1,0").parents() == std::vector<int>{0, 1, 0});
  CHECK(parse_heap("").size() == 0);
  CHECK_THROWS_AS(parse_heap("0,x"), std::invalid_argument);
}

TEST_CASE("depth and order") {
  CHECK(depth(kExample, 8) == 3);
  CHECK(leq(kExample, 3, 8));
  CHECK_FALSE(leq(kExample, 2, 8));
  CHECK(downset(kExample, 8) == std::vector<int>{3, 6, 8});
  CHECK_THROWS_AS(depth(kExample, 9), std::out_of_range);
  for (int n = 1; n <= 5; ++n)
    for (int i = 1; i <= n; ++i) CHECK(depth(Heap::linear(n), i) == i);
  for (int n = 1; n <= 6; ++n) {
    for (const auto& h : enumerate_heaps(n)) {
      CHECK(depth(h, 1) == 1);
      for (int i = 1; i <= n; ++i) {
        CHECK(leq(h, i, i));
        for (int j = 1; j <= n; ++j) {
          if (!leq(h, i, j)) continue;
          CHECK(i <= j);
          CHECK(depth(h, i) <= depth(h, j));
          CHECK((depth(h, i) == depth(h, j)) == (i == j));
        }
      }
      auto back = from_order(n, [&](int i, int j) { return leq(h, i, j); });
      CHECK(back == h);
    }
  }
}

TEST_CASE("enumeration") {
  CHECK(enumerate_heaps(0).size() == 1);
  CHECK(enumerate_heaps(1) == std::vector<Heap>{Heap({0})});
  CHECK(enumerate_heaps(3).size() == 6);
  std::size_t fact = 1;
  for (int n = 1; n <= 7; ++n) {
    fact *= n;
    auto all = enumerate_heaps(n);
    CHECK(all.size() == fact);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  }
}

TEST_CASE("strip and restrict") {
  CHECK(strip(kExample, 4) == Heap({0, 1, 0, 2, 3, 1, 5}));
  CHECK(restrict(kExample, 3) == Heap({0, 1, 0}));
  CHECK(strip(Heap({0, 0}), 1) == Heap({0}));
  CHECK_THROWS_AS(strip(kExample, 2), std::invalid_argument);
  CHECK_THROWS_AS(strip(kExample, 8), std::invalid_argument);
  for (int n = 2; n <= 6; ++n)
    for (const auto& h : enumerate_heaps(n))
      for (int m = 1; m < n; ++m)
        if (is_leaf(h, m)) CHECK(strip(h, m) == strip_by_forest(h, m));
}

TEST_CASE("star composition") {
  Heap psi({0, 0, 2, 1, 2, 3});
  std::vector<Heap> fam = {Heap({0}),    Heap({0}),    Heap({0, 1}),
                           Heap({0, 1}), Heap({0, 0}), Heap({0, 1, 1})};
  CHECK(star(psi, fam) == Heap({0, 0, 2, 1, 0, 2}));
  CHECK(star_relational(psi, fam) == Heap({0, 0, 2, 1, 0, 2}));

  std::vector<Heap> bad = fam;
  bad[5] = Heap({0, 0, 1});
  CHECK_THROWS_AS(star(psi, bad), std::invalid_argument);
  bad.pop_back();
  CHECK_THROWS_AS(star(psi, bad), std::invalid_argument);

  for (int n = 1; n <= 4; ++n) {
    for (const auto& p : enumerate_heaps(n)) {
      std::vector<Heap> linear;
      for (int i = 1; i <= n; ++i) linear.push_back(Heap::linear(depth(p, i)));
      CHECK(star(p, linear) == p);

      std::vector<std::vector<Heap>> all;
      std::vector<Heap> cur;
      families(p, 0, cur, all);
      for (const auto& f : all) {
        const Heap s = star(p, f);
        CHECK(s == star_relational(p, f));
        for (int i = 1; i <= n; ++i) {
          const int hi = depth(p, i);
          CHECK(depth(s, i) == depth(f[i - 1], hi));
          const int j = s.parent(i);
          if (j > 0) CHECK(depth(p, j) == f[i - 1].parent(hi));
        }
      }
    }
    // γ_n ⋆ φ = φ_n.
    for (const auto& phi : enumerate_heaps(n)) {
      std::vector<Heap> fam2;
      for (int i = 1; i <= n; ++i) fam2.push_back(restrict(phi, i));
      CHECK(star(Heap::linear(n), fam2) == phi);
    }
  }
}

TEST_CASE("shape presheaves") {
  auto lin = shape_presheaf(Heap::linear(3));
  auto rep = representable(3);
  CHECK(lin->type_count() == rep->type_count());
  for (int d = 1; d <= 3; ++d) CHECK(lin->types_at(d).size() == 1);
  auto two = shape_presheaf(Heap({0, 0}));
  CHECK(two->types_at(1).size() == 2);
  CHECK(two->term_count() == 0);
  auto t = shape_presheaf_t(kExample);
  CHECK(t->term_count() == 1);
  CHECK(t->term_type(0) == 7);
  CHECK(t->degree(7) == 3);
}

TEST_CASE("hasse diagrams") {
  auto edges = hasse_edges(kExample);
  std::set<std::pair<int, int>> got;
  for (auto e : edges) got.insert({e.child, e.parent});
  CHECK(got == std::set<std::pair<int, int>>{
                   {4, 2}, {5, 2}, {2, 1}, {7, 1}, {8, 6}, {6, 3}});
  CHECK(roots(kExample) == std::vector<int>{1, 3});
  CHECK(hasse_edges(Heap({0, 0, 0})).empty());
  CHECK(roots(Heap({0, 0, 0})).size() == 3);
  CHECK(to_dot(Heap::linear(3)) ==
        "digraph heap {\n  1 [label=\"1\", shape=doublecircle];\n"
        "  2 [label=\"2\"];\n  3 [label=\"3\"];\n  2 -> 1;\n  3 -> 2;\n}\n");
  CHECK(to_ascii(kExample) ==
        "1\n+- 2\n|  +- 4\n|  `- 5\n`- 7\n3\n`- 6\n   `- 8\n");
}
