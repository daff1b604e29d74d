#pragma once

// Strictly increasing lists 0 < α(1) < ... < α(n): the shape of a context in
// which the slots outside the image of α have been substituted away.

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "gatmonad/presheaf.hpp"

namespace gatmonad {

class IncList {
 public:
  IncList() = default;
  // values[i - 1] = α(i). Throws std::invalid_argument unless strictly
  // increasing with α(1) >= 1.
  explicit IncList(std::vector<int> values);

  // ι_n = (1, 2, ..., n).
  static IncList identity(int n);

  int length() const { return static_cast<int>(values_.size()); }
  // α(i) for i in [0, n]; α(0) = 0.
  int at(int i) const;
  // α(n), or 0 for the empty list.
  int last() const { return values_.empty() ? 0 : values_.back(); }
  const std::vector<int>& values() const { return values_; }

  bool contains(int v) const;
  // Position i with α(i) = v, or 0 when v is not in the image.
  int position(int v) const;
  // [α(n)] ∖ im α in increasing order.
  std::vector<int> gaps() const;

  auto operator<=>(const IncList&) const = default;

 private:
  std::vector<int> values_;
};

// All α of length n with α(n) <= bound, lexicographic. C(bound, n) of them.
std::vector<IncList> enumerate_inclists(int n, int bound);

// (βα)(i) = β(α(i)); β must have length α(n).
IncList compose(const IncList& beta, const IncList& alpha);

// ∂α = α restricted to [0, n - 1].
IncList boundary(const IncList& a);
IncList restrict(const IncList& a, int m);

struct Split {
  IncList longer;   // α_j: j inserted at position m + 1
  IncList shorter;  // α^j: α_j restricted to [0, m + 1]
};

// Requires m < n and α(m) < j < α(m + 1).
Split split(const IncList& a, int m, int j);

// [α]: a chain of types "D1".."D<α(n)>", one term "g<i>" at each gap i.
StructurePtr shape_presheaf(const IncList& a);
// [α]_t: [α] plus a term "a" over the top type.
StructurePtr shape_presheaf_t(const IncList& a);

std::string to_string(const IncList& a);
Json to_json(const IncList& a);
IncList inclist_from_json(const Json& j);
IncList parse_inclist(const std::string& text);

}  // namespace gatmonad
