#pragma once

// Min-heaps: functions φ on [0, n] with φ(0) = 0 and φ(i) < i. A heap is the
// shape of a weakened context; node i depends on node φ(i).

#include <compare>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gatmonad/presheaf.hpp"

namespace gatmonad {

class Heap {
 public:
  Heap() = default;
  // parents[i - 1] = φ(i). Throws std::invalid_argument unless φ(i) < i.
  explicit Heap(std::vector<int> parents);

  // γ_n: the linear heap i ↦ i - 1.
  static Heap linear(int n);

  int size() const { return static_cast<int>(parents_.size()); }
  // φ(i) for i in [0, n].
  int parent(int i) const;
  const std::vector<int>& parents() const { return parents_; }

  auto operator<=>(const Heap&) const = default;

 private:
  std::vector<int> parents_;
};

// |{φ(i), φ²(i), ...}|: 1 for roots.
int depth(const Heap& h, int i);
// i ≼ j iff i = φ^k(j) for some k ≥ 0.
bool leq(const Heap& h, int i, int j);
// Ancestors of i in increasing order, ending with i itself.
std::vector<int> downset(const Heap& h, int i);
bool is_leaf(const Heap& h, int i);

// All n! heaps of size n in lexicographic order of (φ(1), ..., φ(n)).
std::vector<Heap> enumerate_heaps(int n);

// Recovers the function form from an order relation on [n]:
// φ(j) = max{i < j : i = 0 or i ≼ j}.
Heap from_order(int n, const std::function<bool(int, int)>& order);

// Removes leaf m < n and renumbers; m must not be in the image of φ.
Heap strip(const Heap& h, int m);
// φ restricted to [0, m].
Heap restrict(const Heap& h, int m);
// ∂φ = restrict(φ, n - 1).
Heap boundary(const Heap& h);

// ψ ⋆ φ for a family φ_i ∈ Hp(dp_ψ(i)), i = 1..n, compatible along ψ.
// Throws std::invalid_argument for a malformed family.
Heap star(const Heap& psi, std::span<const Heap> family);
// Same heap computed from the relational definition.
Heap star_relational(const Heap& psi, std::span<const Heap> family);
void check_star_family(const Heap& psi, std::span<const Heap> family);

// [φ]: nodes of depth m at degree m, boundary i ↦ φ(i), node i named "N<i>".
StructurePtr shape_presheaf(const Heap& h);
// [φ]_t: [φ] plus one term "a" over node n.
StructurePtr shape_presheaf_t(const Heap& h);

struct HasseEdge {
  int child = 0;
  int parent = 0;
  bool operator==(const HasseEdge&) const = default;
};

std::vector<HasseEdge> hasse_edges(const Heap& h);
std::vector<int> roots(const Heap& h);
std::string to_dot(const Heap& h);
std::string to_ascii(const Heap& h);

std::string to_string(const Heap& h);
Json to_json(const Heap& h);
Heap heap_from_json(const Json& j);
// "0,1,0" (empty string for the empty heap).
Heap parse_heap(const std::string& text);

}  // namespace gatmonad
