#pragma once

// The weakening monad W and, with projection terms enabled, the weakening
// and projection monad P. Both share one image representation: a type-element
// of WX(n) is a heap φ ∈ Hp(n) with a labelling h: [φ] → X.

#include <compare>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gatmonad/heap.hpp"
#include "gatmonad/image.hpp"
#include "gatmonad/syntax.hpp"

namespace gatmonad {

struct WType {
  Heap heap;
  std::vector<TypeId> labels;  // labels[i - 1] = h(i), of degree dp(i)
  friend bool operator==(const WType&, const WType&) = default;
  friend auto operator<=>(const WType&, const WType&) = default;
};

struct Var {
  TermId term;
  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

struct Proj {
  int index;
  friend bool operator==(const Proj&, const Proj&) = default;
  friend auto operator<=>(const Proj&, const Proj&) = default;
};

using Payload = std::variant<Var, Proj>;

struct WTerm {
  TypeId type;
  Payload payload;
  friend bool operator==(const WTerm&, const WTerm&) = default;
};

struct WTypeHash {
  std::size_t operator()(const WType& e) const;
};

class WeakeningImage;
using WImagePtr = std::shared_ptr<const WeakeningImage>;

class WeakeningImage : public Image {
 public:
  // WX (or PX when `projections`) up to degree `bound`, elements ordered by
  // degree, then heap, then labels. `labels_key` names the label array in
  // the element JSON.
  static WImagePtr build(StructurePtr base, int bound, bool projections,
                         std::string labels_key = "labels");

  bool projections() const { return projections_; }
  const WType& type(TypeId t) const;
  const WTerm& term(TermId a) const;
  std::optional<TypeId> find(const WType& e) const;
  std::optional<TermId> find_term(TypeId t, const Payload& p) const;

  struct Data;

 private:
  WeakeningImage(StructurePtr base, int bound, bool projections)
      : Image(std::move(base), bound), projections_(projections) {}

  bool projections_;
  std::shared_ptr<Data> data_;
};

WImagePtr apply_W(StructurePtr x, int bound);

// Whether (φ, h) is a valid element over x.
bool is_valid(const Structure& x, const WType& e);
// Whether π_i is a legal projection term over (φ, h).
bool projection_allowed(const WType& e, int i);

// (γ_n, i ↦ ∂^{n-i} A).
WType unit_W(const Structure& x, TypeId a);
Map unit_map(const WeakeningImage& img);

// (ψ, (φ_i, h_i)) ↦ (ψ ⋆ φ, i ↦ h_i(dp_ψ(i))); `outer` labels index the
// inner image's elements.
WType mult_W(const WeakeningImage& inner, const WType& outer,
             Mutation m = Mutation::none);
// Term payload of μ for a term of the outer image: Var(a) of an inner Var(a)
// is a; an outer π_i stays π_i; an inner π_i becomes π_{ψ^{#n - i}(n)}.
Payload mult_payload(const WeakeningImage& inner, const WType& outer,
                     const Payload& p, Mutation m = Mutation::none);
// μ: outer → inner, where outer.base() is inner.structure().
Map mult_map(const WeakeningImage& outer, const WeakeningImage& inner,
             Mutation m = Mutation::none);

// F(f): relabel along f. Results outside dst are left unassigned.
Map fmap(const Map& f, const WeakeningImage& src, const WeakeningImage& dst);

// Context entry i is h(i)(x_{j_1}, ..., x_{j_{k-1}}) over the strict
// ancestors j_1 ≺ ... ≺ j_{k-1} of i.
Judgement render_judgement(const Structure& x, const WType& e);
Judgement render_term_judgement(const Structure& x, const WType& e,
                                const Payload& p);

Json to_json(const Structure& x, const WType& e);
Json payload_json(const Structure& x, const Payload& p, bool tagged);
// Inverses of the two above; nullopt for anything malformed.
std::optional<WType> wtype_from_json(const Structure& x, const Json& j);
std::optional<Payload> parse_payload(const Structure& x, const Json& j, bool tagged);

}  // namespace gatmonad
