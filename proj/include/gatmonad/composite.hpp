#pragma once

// The distributive law δ: SP ⇒ PS and the composite monad T = PS.
//
// Elements are handled as values over an arbitrary structure Y: an
// SPElement is an element of S(PY) and a PSElement one of P(SY). Var
// payloads name terms of Y. δ itself never needs Y.

#include <optional>
#include <utility>
#include <vector>

#include "gatmonad/projection.hpp"
#include "gatmonad/substitution.hpp"

namespace gatmonad {

struct SPElement {
  IncList inc;
  Heap heap;                    // size inc.last()
  std::vector<TypeId> labels;   // h
  std::vector<std::pair<int, Payload>> gaps;  // k, at the gaps of inc
  std::optional<Payload> term;  // over (heap, labels)

  const Payload& gap(int i) const;
  friend bool operator==(const SPElement&, const SPElement&) = default;
};

struct PSElement {
  Heap heap;
  std::vector<SType> nodes;     // nodes[i - 1] has degree dp(i)
  std::optional<Payload> term;  // Var over the head of the last node, or π_i

  friend bool operator==(const PSElement&, const PSElement&) = default;
  friend auto operator<=>(const PSElement&, const PSElement&) = default;
};

bool is_valid(const Structure& y, const SPElement& e);
bool is_valid(const Structure& y, const PSElement& e);

bool projection_free(const SPElement& e);
// Projection gap terms only at nodes outside the image of the heap.
bool nearly_projection_free(const SPElement& e);

// min{i : i ≤_k j}, where i ≤_k j is generated by k(j) = π_i for gaps j.
int contraction_root(const SPElement& e, int j);
// Replaces the heap by φ̄(i) = contraction_root(φ(i)).
SPElement contract(const SPElement& e);

// i ≼ j in α*φ iff α(i) ≼_φ α(j).
Heap alpha_star_heap(const IncList& a, const Heap& phi);
// α^φ_p for p = 1..n.
std::vector<IncList> alpha_phi(const IncList& a, const Heap& phi);
// (α*φ, (α^φ, h + k)) without a term. Throws std::invalid_argument when a
// gap term it needs is a projection.
PSElement alpha_star(const SPElement& e);

// δ on a type- or term-element.
PSElement delta(const SPElement& e, Mutation m = Mutation::none);

// Reads an element of S(PY) (with an optional term of PY over its head).
SPElement to_sp(const WeakeningImage& py, const SType& e,
                std::optional<TermId> term = std::nullopt);

// μ^P on values: ψ with a family of P-elements; an outer Var term stands for
// the term of the last family member.
PSElement mult_P_values(const Heap& psi, const std::vector<PSElement>& family,
                        const std::optional<Payload>& outer_term,
                        Mutation m = Mutation::none);

// η^P_S ∘ η^S at A, and at a term over A.
PSElement unit_T(const Structure& x, TypeId a);
PSElement unit_T_term(const Structure& x, TermId a);

class CompositeImage;
using TImagePtr = std::shared_ptr<const CompositeImage>;

// TX = P(SX), both layers cut at the same degree bound.
class CompositeImage : public Image {
 public:
  static TImagePtr build(StructurePtr base, int bound);

  const SubstitutionImage& s() const { return *s_; }
  const WeakeningImage& p() const { return *p_; }

  PSElement type(TypeId t) const;
  PSElement term(TermId a) const;
  std::optional<TypeId> find(const PSElement& e) const;
  // Needs e.term.
  std::optional<TermId> find_term(const PSElement& e) const;

 private:
  CompositeImage(StructurePtr base, int bound) : Image(std::move(base), bound) {}
  SImagePtr s_;
  WImagePtr p_;
};

TImagePtr apply_T(StructurePtr x, int bound);

Map unit_map(const CompositeImage& img);
// μ^T = P(μ^S) ∘ μ^P ∘ P(δ_S) on one element of T(TX), given as a value
// over inner.structure().
PSElement mult_T(const CompositeImage& inner, const PSElement& outer,
                 Mutation m = Mutation::none);
Map mult_map(const CompositeImage& outer, const CompositeImage& inner,
             Mutation m = Mutation::none);
Map fmap(const Map& f, const CompositeImage& src, const CompositeImage& dst);

// Context entry i is the substituted type of node i over the variables of
// its strict ancestors.
Judgement render_judgement(const Structure& x, const PSElement& e);
// Inverse of render_judgement on canonical judgements over a named
// structure. Throws std::invalid_argument for anything else.
PSElement extract_normal_form(const Structure& x, const Judgement& j);

Json to_json(const Structure& y, const SPElement& e);
Json to_json(const Structure& y, const PSElement& e);
SPElement sp_from_json(const Structure& y, const Json& j);
PSElement ps_from_json(const Structure& y, const Json& j);

}  // namespace gatmonad
