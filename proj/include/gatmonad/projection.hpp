#pragma once

// The weakening and projection monad P. It agrees with W on type-elements;
// its terms over (φ, h) are the terms of X over h(n) together with the
// projections π_i for i ∈ [n-1] with φ(i) = φ(n) and h(i) = h(n).
// There is deliberately no projection-only monad.

#include "gatmonad/weakening.hpp"

namespace gatmonad {

WImagePtr apply_P(StructurePtr x, int bound);

// Legal projection indices over (φ, h), increasing.
std::vector<int> projection_indices(const WType& e);

// θ: WX → PX, the inclusion of the Var terms.
Map theta_map(const WeakeningImage& w, const WeakeningImage& p);

struct PElement {
  WType type;
  std::optional<Payload> term;
};

// μ^P on a single element of P(PX): the type part of μ^W with the
// three-case term rule.
PElement mult_P(const WeakeningImage& inner, const PElement& outer,
                Mutation m = Mutation::none);

}  // namespace gatmonad
