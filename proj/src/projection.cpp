#include "gatmonad/projection.hpp"

#include <stdexcept>

namespace gatmonad {

WImagePtr apply_P(StructurePtr x, int bound) {
  return WeakeningImage::build(std::move(x), bound, true);
}

std::vector<int> projection_indices(const WType& e) {
  std::vector<int> out;
  for (int i = 1; i < e.heap.size(); ++i)
    if (projection_allowed(e, i)) out.push_back(i);
  return out;
}

Map theta_map(const WeakeningImage& w, const WeakeningImage& p) {
  if (w.projections() || !p.projections() || w.base() != p.base())
    throw std::invalid_argument("θ goes from WX to PX over the same X");
  const Structure& s = *w.structure();
  std::vector<TypeId> types(s.type_count(), kNone);
  std::vector<TermId> terms(s.term_count(), kNone);
  for (TypeId t = 0; t < static_cast<TypeId>(types.size()); ++t)
    if (auto id = p.find(w.type(t))) types[t] = *id;
  for (TermId a = 0; a < static_cast<TermId>(terms.size()); ++a) {
    const WTerm& e = w.term(a);
    if (types[e.type] != kNone)
      if (auto id = p.find_term(types[e.type], e.payload)) terms[a] = *id;
  }
  return Map(w.structure(), p.structure(), std::move(types), std::move(terms));
}

PElement mult_P(const WeakeningImage& inner, const PElement& outer, Mutation m) {
  PElement out{mult_W(inner, outer.type, m), std::nullopt};
  if (outer.term) out.term = mult_payload(inner, outer.type, *outer.term, m);
  return out;
}

}  // namespace gatmonad
