#pragma once

// Raw syntax of dependent sequents and the derivation oracle: expressions,
// judgements, boundaries, α-canonical forms, rule application and bounded
// forward-chaining saturation of free theories on a structure.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gatmonad/presheaf.hpp"

namespace gatmonad {

class Expression {
 public:
  Expression() = default;
  static Expression variable(std::string name);
  static Expression apply(std::string symbol, std::vector<Expression> args = {});
  // x1, x2, ...: the canonical variable names.
  static Expression canonical_variable(int index);

  bool is_variable() const { return is_var_; }
  const std::string& name() const { return name_; }
  const std::vector<Expression>& args() const { return args_; }
  // Variables and constants have depth 1.
  int depth() const;

  friend bool operator==(const Expression& a, const Expression& b);
  friend std::strong_ordering operator<=>(const Expression& a,
                                          const Expression& b);

 private:
  bool is_var_ = false;
  std::string name_;
  std::vector<Expression> args_;
};

std::set<std::string> free_vars(const Expression& e);
// e[t/x]
Expression substitute(const Expression& e, const Expression& t,
                      const std::string& x);
std::string to_string(const Expression& e);
// Index of a canonical variable name "x<k>", or 0.
int canonical_index(const std::string& name);

struct ContextEntry {
  std::string var;
  Expression type;
  friend bool operator==(const ContextEntry&, const ContextEntry&) = default;
  friend auto operator<=>(const ContextEntry&, const ContextEntry&) = default;
};

enum class Form { type, term, type_eq, term_eq };

// type:    Γ ⊢ subject type
// term:    Γ ⊢ subject : type
// type_eq: Γ ⊢ subject = other type
// term_eq: Γ ⊢ subject = other : type
struct Judgement {
  std::vector<ContextEntry> context;
  Form form = Form::type;
  Expression subject;
  Expression other;
  Expression type;

  int degree() const { return static_cast<int>(context.size()) + 1; }

  static Judgement type_judgement(std::vector<ContextEntry> ctx, Expression t);
  static Judgement term_judgement(std::vector<ContextEntry> ctx, Expression t,
                                  Expression ty);
  static Judgement type_equality(std::vector<ContextEntry> ctx, Expression a,
                                 Expression b);
  static Judgement term_equality(std::vector<ContextEntry> ctx, Expression a,
                                 Expression b, Expression ty);

  friend bool operator==(const Judgement&, const Judgement&) = default;
  friend auto operator<=>(const Judgement&, const Judgement&) = default;
};

std::vector<Judgement> boundary(const Judgement& j);

// Renames context variables to x1, x2, ... in order. Throws
// std::invalid_argument when a variable is used outside the scope of its
// declaration or two declarations share a name.
Judgement alpha_canonical(const Judgement& j);

// "x1 : A, x2 : B(x1) |- C(x1, x2) type", "|- t : A", "|- A = A type",
// "|- t = t : A". The parser also accepts "⊢" for "|-". Names bound by the
// context and names of the form x<k> parse as variables, all others as
// constants.
std::string to_string(const Judgement& j);
Judgement parse_judgement(const std::string& text);

struct RuleSet {
  bool weakening = false;
  bool projection = false;
  bool substitution = false;
  // Equality, symmetry, transitivity, conversion and the two equality
  // substitution rules. Off for free-theory saturation.
  bool equality = false;

  bool decent() const { return weakening || !projection; }
  // "none", "w", "wp", "s", "ws", "wps".
  static RuleSet parse(const std::string& name);
  std::string name() const;
};

enum class Rule {
  weaken,
  project,
  subst,
  subst_eq_type,
  subst_eq_term,
  refl_type,
  refl_term,
  sym_type,
  sym_term,
  trans_type,
  trans_term,
  conv_term,
  conv_term_eq,
};

class RuleError : public std::invalid_argument {
 public:
  enum class Kind { shape_mismatch, side_condition };
  RuleError(Kind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Applies one rule of the calculus to canonicalised premises and returns the
// canonical conclusion. `position` is the length of Γ for the weakening and
// substitution rules; it is ignored elsewhere.
Judgement apply_rule(Rule rule, const std::vector<Judgement>& premises,
                     int position = 0);

// 𝒥_A for every type-element and 𝒥_a for every term-element, in id order.
std::vector<Judgement> basic_judgements(const Structure& x);

struct SaturationBounds {
  int max_degree = 4;       // N: output degree
  int internal_degree = 4;  // M: largest degree kept during the closure
  int max_expr_depth = 2;   // E: deepest expression allowed
};

SaturationBounds default_bounds(const Structure& x, const RuleSet& rules, int n);

class BoundOverflow : public std::runtime_error {
 public:
  BoundOverflow(const std::string& what, Judgement frontier)
      : std::runtime_error(what), frontier_(std::move(frontier)) {}
  const Judgement& frontier() const { return frontier_; }

 private:
  Judgement frontier_;
};

struct SaturationResult {
  // Canonical judgements of degree <= N, ordered by (degree, text).
  std::vector<Judgement> judgements;
  std::size_t derived_total = 0;  // including the internal ones above N
};

// Least fixpoint of the enabled rules over the basic judgements of x within
// the bounds. Throws BoundOverflow when a conclusion exceeds the expression
// depth bound, std::invalid_argument for an indecent rule set or M < N.
SaturationResult saturate(const Structure& x, const RuleSet& rules,
                          const SaturationBounds& bounds);

}  // namespace gatmonad
