#pragma once

// An endofunctor applied to a structure, materialised up to a degree bound:
// the generated structure plus the data describing each of its elements.

#include <memory>

#include "gatmonad/presheaf.hpp"

namespace gatmonad {

class Image {
 public:
  virtual ~Image() = default;

  // The structure FX, truncated at bound().
  const StructurePtr& structure() const { return structure_; }
  // X.
  const StructurePtr& base() const { return base_; }
  int bound() const { return bound_; }

 protected:
  Image(StructurePtr base, int bound) : base_(std::move(base)), bound_(bound) {}
  void set_structure(StructurePtr s) { structure_ = std::move(s); }

 private:
  StructurePtr base_;
  StructurePtr structure_;
  int bound_;
};

using ImagePtr = std::shared_ptr<const Image>;

// Raised when a result falls outside a truncated image.
class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Single-case corruptions used to show that the law suites are not vacuous.
enum class Mutation {
  none,
  w_mult_keeps_outer_heap,  // μ^W returns ψ instead of ψ ⋆ φ
  p_mult_swap_proj,         // μ^P exchanges the two projection cases
  s_mult_drop_outer_gaps,   // μ^S fills outer gaps from the inner element
  delta_skip_contract,      // δ runs α* on φ rather than on φ̄
};

}  // namespace gatmonad
