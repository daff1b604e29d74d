#pragma once

// Bounded-exhaustive law checking: monad laws, cartesian naturality
// squares, the four distributive-law axioms for δ, the middle unit law,
// pullback preservation and comparison with the derivation oracle.

#include <string>

#include "gatmonad/composite.hpp"

namespace gatmonad {

enum class MonadKind { W, P, S, T };

MonadKind parse_monad(const std::string& name);  // "w", "p", "s", "t"
std::string to_string(MonadKind k);

struct CheckReport {
  std::string suite;
  std::string subject;  // what was checked, e.g. a fixture or transformation
  Json bounds = Json::object();
  bool passed = true;
  std::size_t checked = 0;
  std::string failure;          // first failing equation or square
  Json witness = nullptr;       // replayable elements for the failure

  std::string text() const;
  Json to_json() const;
};

// Internal degree bound used when none is given: N for W and P,
// max(N, maxdeg) for S and T.
int default_internal(MonadKind k, const Structure& x, int n);

// Left unit, right unit and associativity on all elements of degree <= n.
// For T, associativity visits only elements of T(T(TX)) over a linear outer
// heap unless `full` is set; `full` materializes T(T(TX)) and is only
// feasible for very small structures.
CheckReport check_monad_laws(MonadKind k, StructurePtr x, int n, int internal,
                             Mutation m = Mutation::none, bool full = false);

// Naturality square of η (or μ) along X -> terminal(max(n, maxdeg X)),
// checked as a pullback at degrees <= n.
CheckReport check_cartesian(MonadKind k, bool multiplication, StructurePtr x, int n,
                            int internal, Mutation m = Mutation::none);

// δ∘η^S_P = Pη^S, δ∘Sη^P = η^P_S, δ∘μ^S_P = Pμ^S∘δ_S∘Sδ and
// δ∘Sμ^P = μ^P_S∘Pδ∘δ_P on elements of degree <= n.
CheckReport check_beck(StructurePtr x, int n, int internal,
                       Mutation m = Mutation::none);

// μ^T ∘ P(η^S η^P)S = id on TX at degrees <= n.
CheckReport check_middle_unit(StructurePtr x, int n, Mutation m = Mutation::none);

// F(X ×_Z Y) -> FX ×_FZ FY is a bijection at degrees <= n.
CheckReport check_pullback_preservation(MonadKind k, const Map& left, const Map& right,
                                        int n);

// The μ^T square on X = {A:1} at degree 1.
CheckReport counterexample_T(int internal = 2);

// The rendered image of the monad for `rules` (identity, W, P, S, W∘S or
// P∘S) equals the saturation at every degree <= n.
CheckReport check_oracle(StructurePtr x, const RuleSet& rules, int n);
// Compares the image for `image_rules` with the saturation for `rules`.
CheckReport check_oracle(StructurePtr x, const RuleSet& rules, int n,
                         const RuleSet& image_rules);

}  // namespace gatmonad
