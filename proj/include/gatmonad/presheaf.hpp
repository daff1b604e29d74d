#pragma once

// Finitely supported type-and-term structures (presheaves on the category
// generated by 1 <- 2 <- 3 <- ... with a term object n_t over each n), the
// maps between them, hom-set enumeration and pullback testing.

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace gatmonad {

using Json = nlohmann::json;

using TypeId = int;
using TermId = int;
inline constexpr int kNone = -1;

struct TypeDecl {
  std::string name;
  int degree = 1;
  std::optional<std::string> boundary;
};

struct TermDecl {
  std::string name;
  std::string over;
};

// Raw textual description of a structure, as read from a structure file.
struct StructureDecl {
  std::vector<TypeDecl> types;
  std::vector<TermDecl> terms;
};

struct Violation {
  std::string message;
  bool operator==(const Violation&) const = default;
};

// Empty result means the declaration is a valid structure.
std::vector<Violation> validate(const StructureDecl& decl);

bool is_identifier(std::string_view name);

// Describes elements of a generated structure (one whose elements are
// themselves shapes labelled by another structure). Named structures do not
// need one.
class ElementCodec {
 public:
  virtual ~ElementCodec() = default;
  virtual Json type_json(TypeId id) const = 0;
  virtual Json term_json(TermId id) const = 0;
  virtual std::optional<TypeId> parse_type(const Json& j) const = 0;
  virtual std::optional<TermId> parse_term(const Json& j) const = 0;
};

class Structure;
using StructurePtr = std::shared_ptr<const Structure>;

// Immutable once built. Elements are dense integer ids in insertion order;
// boundaries are stored one step at a time.
class Structure {
 public:
  int max_degree() const { return static_cast<int>(by_degree_.size()); }
  std::size_t type_count() const { return type_degree_.size(); }
  std::size_t term_count() const { return term_type_.size(); }

  int degree(TypeId t) const { return type_degree_[t]; }
  TypeId boundary(TypeId t) const { return type_boundary_[t]; }
  // ∂^k(t); k must not exceed degree(t) - 1.
  TypeId iterated_boundary(TypeId t, int k) const;

  std::span<const TypeId> types_at(int degree) const;
  std::span<const TypeId> cofaces(TypeId t) const { return cofaces_[t]; }
  std::span<const TermId> terms_over(TypeId t) const { return terms_over_[t]; }
  TypeId term_type(TermId a) const { return term_type_[a]; }

  std::string type_name(TypeId t) const;
  std::string term_name(TermId a) const;
  Json type_json(TypeId t) const;
  Json term_json(TermId a) const;
  std::optional<TypeId> find_type(std::string_view name) const;
  std::optional<TermId> find_term(std::string_view name) const;
  std::optional<TypeId> parse_type(const Json& j) const;
  std::optional<TermId> parse_term(const Json& j) const;

  bool named() const { return codec_ == nullptr; }
  StructureDecl to_decl() const;

 private:
  friend class StructureBuilder;
  Structure() = default;

  std::vector<int> type_degree_;
  std::vector<TypeId> type_boundary_;
  std::vector<std::vector<TypeId>> by_degree_;
  std::vector<std::vector<TypeId>> cofaces_;
  std::vector<std::vector<TermId>> terms_over_;
  std::vector<TypeId> term_type_;
  std::vector<std::string> type_names_;
  std::vector<std::string> term_names_;
  std::unordered_map<std::string, TypeId> type_index_;
  std::unordered_map<std::string, TermId> term_index_;
  std::shared_ptr<const ElementCodec> codec_;
};

class StructureBuilder {
 public:
  StructureBuilder() : s_(new Structure) {}

  // Boundary must already exist and have degree `degree - 1`, or be kNone
  // when degree is 1. Throws std::invalid_argument otherwise.
  TypeId add_type(int degree, TypeId boundary, std::string name = {});
  TermId add_term(TypeId over, std::string name = {});
  void set_codec(std::shared_ptr<const ElementCodec> codec);

  // Raises the reported maximum degree even if no element lives there.
  void reserve_degree(int degree);

  StructurePtr build();

 private:
  std::unique_ptr<Structure> s_;
};

// Throws std::invalid_argument listing every violation.
StructurePtr make_structure(const StructureDecl& decl);
StructureDecl parse_structure_json(const Json& j);
Json structure_to_json(const Structure& s);
StructurePtr load_structure(const std::string& path);

// One type-element per degree 1..maxdeg, one term over each.
StructurePtr terminal(int maxdeg);
// The representable presheaf at degree n: a chain 1..n, no terms.
StructurePtr representable(int n);

class Map {
 public:
  Map(StructurePtr source, StructurePtr target, std::vector<TypeId> types,
      std::vector<TermId> terms);

  static Map identity(StructurePtr s);
  // Rejects assignments that do not preserve degree, boundaries or the
  // term-over relation.
  static Map checked(StructurePtr source, StructurePtr target,
                     std::vector<TypeId> types, std::vector<TermId> terms);

  const StructurePtr& source() const { return source_; }
  const StructurePtr& target() const { return target_; }
  TypeId type(TypeId t) const { return types_[t]; }
  TermId term(TermId a) const { return terms_[a]; }
  const std::vector<TypeId>& type_assignment() const { return types_; }
  const std::vector<TermId>& term_assignment() const { return terms_; }

  // First element where the naturality conditions fail, if any.
  std::optional<std::string> defect() const;

  // Same assignment. Entries may be kNone for elements the target's
  // truncation does not contain.
  bool operator==(const Map& other) const {
    return types_ == other.types_ && terms_ == other.terms_;
  }

 private:
  StructurePtr source_, target_;
  std::vector<TypeId> types_;
  std::vector<TermId> terms_;
};

// g ∘ f
Map compose(const Map& g, const Map& f);

// Lexicographic in the assignment (types in source order, then terms).
std::vector<Map> hom_enumerate(const StructurePtr& a, const StructurePtr& x);
std::size_t hom_count(const Structure& a, const Structure& x);

// Sends each named element of x to the element of z with the same name, or
// the name given in `rename`. Throws std::invalid_argument if that is not a
// map.
Map map_by_name(const StructurePtr& x, const StructurePtr& z,
                const std::map<std::string, std::string>& rename = {});

// The unique map to terminal(maxdeg); throws if x has a higher degree.
Map bang(const StructurePtr& x, const StructurePtr& term);

struct SquareCheck {
  enum class Status { pullback, not_pullback, not_commuting };
  Status status = Status::pullback;
  // For not_pullback: the fibre pair (x, y) with its preimage count.
  bool at_term = false;
  int degree = 0;
  int x = kNone, y = kNone;
  std::size_t preimages = 0;
  std::string witness;

  bool ok() const { return status == Status::pullback; }
};

inline constexpr int kUnbounded = std::numeric_limits<int>::max();

// Square P --f--> X, P --g--> Y, X --p--> Z, Y --q--> Z. Only elements of
// degree <= max_degree take part; maps may leave higher elements unassigned.
SquareCheck check_pullback(const Map& f, const Map& g, const Map& p,
                           const Map& q, int max_degree = kUnbounded);
// Throws std::invalid_argument when the square does not commute.
bool is_pullback(const Map& f, const Map& g, const Map& p, const Map& q,
                 int max_degree = kUnbounded);

struct Cospan {
  Map left;   // X -> Z
  Map right;  // Y -> Z
};

struct FibreProduct {
  StructurePtr apex;
  Map left;   // apex -> X
  Map right;  // apex -> Y
};

FibreProduct fibre_product(const Map& p, const Map& q);

}  // namespace gatmonad
