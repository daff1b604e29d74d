#pragma once

// The substitution monad S. A type-element of SX(n) is an inc-list α of
// length n with a head type of degree α(n) and, for each gap i of α, a term
// over ∂^{α(n)-i}(head): the type obtained from head by substituting those
// terms for the variables not listed in α.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "gatmonad/image.hpp"
#include "gatmonad/inclist.hpp"
#include "gatmonad/syntax.hpp"

namespace gatmonad {

struct SType {
  IncList inc;
  TypeId head = kNone;
  // (i, term) for each gap i of inc, increasing in i.
  std::vector<std::pair<int, TermId>> gaps;

  TermId gap(int i) const;  // kNone when i is not a gap
  friend bool operator==(const SType&, const SType&) = default;
  friend auto operator<=>(const SType&, const SType&) = default;
};

struct STerm {
  TypeId type;
  TermId term;  // a term of X over the head
};

class SubstitutionImage;
using SImagePtr = std::shared_ptr<const SubstitutionImage>;

class SubstitutionImage : public Image {
 public:
  // SX up to degree `bound`, keeping only α with α(n) <= max_inc. Elements
  // are ordered by degree, then inc-list, head and gaps.
  static SImagePtr build(StructurePtr base, int bound, int max_inc = kUnbounded);

  const SType& type(TypeId t) const;
  const STerm& term(TermId a) const;
  std::optional<TypeId> find(const SType& e) const;
  std::optional<TermId> find_term(TypeId t, TermId base_term) const;

  struct Data;

 private:
  SubstitutionImage(StructurePtr base, int bound) : Image(std::move(base), bound) {}
  std::shared_ptr<Data> data_;
};

SImagePtr apply_S(StructurePtr x, int bound);

// Visits the type-elements of SX(n) with α(n) <= max_inc, in image order,
// without storing them.
void for_each_stype(const Structure& x, int n, int max_inc,
                    const std::function<void(const SType&)>& visit);

bool is_valid(const Structure& x, const SType& e);
// (∂α, ∂^{α(n)-α(n-1)} head, gaps below α(n-1)).
SType boundary(const Structure& x, const SType& e);

// (ι_n, A).
SType unit_S(const Structure& x, TypeId a);
Map unit_map(const SubstitutionImage& img);

// (α, (β, h, k)) ↦ (βα, h ∪ k). `outer` is an element of S(SX): its head
// indexes inner's types and its gap terms inner's terms.
SType mult_S(const SubstitutionImage& inner, const SType& outer,
             Mutation m = Mutation::none);
Map mult_map(const SubstitutionImage& outer, const SubstitutionImage& inner,
             Mutation m = Mutation::none);

Map fmap(const Map& f, const SubstitutionImage& src, const SubstitutionImage& dst);

// Context entry l is ∂^{α(n)-α(l)}(head)(e_1, ..., e_{α(l)-1}) where e_k is
// x_p for k = α(p) and the gap term at k applied to e_1, ..., e_{k-1}
// otherwise.
Judgement render_judgement(const Structure& x, const SType& e);
Judgement render_term_judgement(const Structure& x, const SType& e, TermId a);
// The substituted arguments e_1, ..., e_{α(n)-1} of the head.
std::vector<Expression> head_arguments(const Structure& x, const SType& e);

// {"inc", "head", "gaps": {"<i>": term}, "term": null}
Json to_json(const Structure& x, const SType& e);
std::optional<SType> stype_from_json(const Structure& x, const Json& j);

}  // namespace gatmonad
