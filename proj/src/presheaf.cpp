#include "gatmonad/presheaf.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gatmonad {

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name[0])) return false;
  for (char c : name.substr(1))
    if (!alpha(c) && !digit(c) && c != '\'') return false;
  // x1, x2, ... are the canonical variable names.
  if (name.size() > 1 && name[0] == 'x' &&
      std::all_of(name.begin() + 1, name.end(), digit))
    return false;
  return true;
}

std::vector<Violation> validate(const StructureDecl& decl) {
  std::vector<Violation> out;
  auto report = [&](std::string m) { out.push_back({std::move(m)}); };

  std::map<std::string, const TypeDecl*> types;
  for (const auto& t : decl.types) {
    if (!is_identifier(t.name)) report("invalid name " + t.name);
    if (!types.emplace(t.name, &t).second)
      report("duplicate type name " + t.name);
    if (t.degree < 1) report("non-positive degree at " + t.name);
  }
  std::set<std::string> terms;
  for (const auto& a : decl.terms) {
    if (!is_identifier(a.name)) report("invalid name " + a.name);
    if (!terms.insert(a.name).second) report("duplicate term name " + a.name);
    if (types.count(a.name)) report("duplicate name " + a.name);
  }
  for (const auto& t : decl.types) {
    if (t.degree < 1) continue;
    if (t.degree == 1) {
      if (t.boundary) report("unexpected boundary at " + t.name);
      continue;
    }
    if (!t.boundary) {
      report("missing boundary at " + t.name);
      continue;
    }
    auto it = types.find(*t.boundary);
    if (it == types.end()) {
      report("dangling boundary at " + t.name);
      continue;
    }
    if (it->second->degree != t.degree - 1)
      report("boundary degree mismatch at " + t.name);
  }
  for (const auto& a : decl.terms)
    if (!types.count(a.over)) report("dangling term at " + a.name);
  return out;
}

// ---------------------------------------------------------------------------

TypeId Structure::iterated_boundary(TypeId t, int k) const {
  for (int i = 0; i < k; ++i) {
    t = type_boundary_[t];
    if (t == kNone) throw std::out_of_range("iterated boundary below degree 1");
  }
  return t;
}

std::span<const TypeId> Structure::types_at(int degree) const {
  if (degree < 1 || degree > max_degree()) return {};
  return by_degree_[degree - 1];
}

std::string Structure::type_name(TypeId t) const {
  if (codec_) return codec_->type_json(t).dump();
  if (!type_names_[t].empty()) return type_names_[t];
  return "#" + std::to_string(t);
}

std::string Structure::term_name(TermId a) const {
  if (codec_) return codec_->term_json(a).dump();
  if (!term_names_[a].empty()) return term_names_[a];
  return "#t" + std::to_string(a);
}

Json Structure::type_json(TypeId t) const {
  return codec_ ? codec_->type_json(t) : Json(type_name(t));
}

Json Structure::term_json(TermId a) const {
  return codec_ ? codec_->term_json(a) : Json(term_name(a));
}

std::optional<TypeId> Structure::find_type(std::string_view name) const {
  auto it = type_index_.find(std::string(name));
  if (it == type_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<TermId> Structure::find_term(std::string_view name) const {
  auto it = term_index_.find(std::string(name));
  if (it == term_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<TypeId> Structure::parse_type(const Json& j) const {
  if (codec_) return codec_->parse_type(j);
  if (!j.is_string()) return std::nullopt;
  return find_type(j.get<std::string>());
}

std::optional<TermId> Structure::parse_term(const Json& j) const {
  if (codec_) return codec_->parse_term(j);
  if (!j.is_string()) return std::nullopt;
  return find_term(j.get<std::string>());
}

StructureDecl Structure::to_decl() const {
  StructureDecl d;
  for (TypeId t = 0; t < static_cast<TypeId>(type_count()); ++t) {
    TypeDecl td{type_name(t), degree(t), std::nullopt};
    if (boundary(t) != kNone) td.boundary = type_name(boundary(t));
    d.types.push_back(std::move(td));
  }
  for (TermId a = 0; a < static_cast<TermId>(term_count()); ++a)
    d.terms.push_back({term_name(a), type_name(term_type(a))});
  return d;
}

// ---------------------------------------------------------------------------

TypeId StructureBuilder::add_type(int degree, TypeId boundary,
                                  std::string name) {
  auto& s = *s_;
  const auto id = static_cast<TypeId>(s.type_degree_.size());
  if (degree < 1) throw std::invalid_argument("degree must be positive");
  if (degree == 1 && boundary != kNone)
    throw std::invalid_argument("degree-1 type with a boundary");
  if (degree > 1) {
    if (boundary < 0 || boundary >= id)
      throw std::invalid_argument("boundary does not name an existing type");
    if (s.type_degree_[boundary] != degree - 1)
      throw std::invalid_argument("boundary degree mismatch");
  }
  s.type_degree_.push_back(degree);
  s.type_boundary_.push_back(boundary);
  if (static_cast<int>(s.by_degree_.size()) < degree)
    s.by_degree_.resize(degree);
  s.by_degree_[degree - 1].push_back(id);
  s.cofaces_.emplace_back();
  s.terms_over_.emplace_back();
  if (boundary != kNone) s.cofaces_[boundary].push_back(id);
  if (!name.empty()) {
    if (!s.type_index_.emplace(name, id).second)
      throw std::invalid_argument("duplicate type name " + name);
  }
  s.type_names_.push_back(std::move(name));
  return id;
}

TermId StructureBuilder::add_term(TypeId over, std::string name) {
  auto& s = *s_;
  if (over < 0 || over >= static_cast<TypeId>(s.type_degree_.size()))
    throw std::invalid_argument("term over a missing type");
  const auto id = static_cast<TermId>(s.term_type_.size());
  s.term_type_.push_back(over);
  s.terms_over_[over].push_back(id);
  if (!name.empty()) {
    if (!s.term_index_.emplace(name, id).second)
      throw std::invalid_argument("duplicate term name " + name);
  }
  s.term_names_.push_back(std::move(name));
  return id;
}

void StructureBuilder::set_codec(std::shared_ptr<const ElementCodec> codec) {
  s_->codec_ = std::move(codec);
}

void StructureBuilder::reserve_degree(int degree) {
  if (static_cast<int>(s_->by_degree_.size()) < degree)
    s_->by_degree_.resize(degree);
}

StructurePtr StructureBuilder::build() {
  StructurePtr out(s_.release());
  s_.reset(new Structure);
  return out;
}

StructurePtr make_structure(const StructureDecl& decl) {
  auto violations = validate(decl);
  if (!violations.empty()) {
    std::string msg = "invalid structure:";
    for (const auto& v : violations) msg += "\n  " + v.message;
    throw std::invalid_argument(msg);
  }
  std::vector<const TypeDecl*> order;
  for (const auto& t : decl.types) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* a, auto* b) { return a->degree < b->degree; });
  StructureBuilder b;
  std::map<std::string, TypeId> ids;
  for (const auto* t : order) {
    TypeId bd = t->boundary ? ids.at(*t->boundary) : kNone;
    ids[t->name] = b.add_type(t->degree, bd, t->name);
  }
  for (const auto& a : decl.terms) b.add_term(ids.at(a.over), a.name);
  return b.build();
}

StructureDecl parse_structure_json(const Json& j) {
  if (!j.is_object() || !j.contains("types"))
    throw std::invalid_argument("structure document needs a \"types\" array");
  StructureDecl d;
  for (const auto& t : j.at("types")) {
    TypeDecl td;
    td.name = t.at("name").get<std::string>();
    td.degree = t.at("degree").get<int>();
    if (t.contains("boundary") && !t.at("boundary").is_null())
      td.boundary = t.at("boundary").get<std::string>();
    d.types.push_back(std::move(td));
  }
  if (j.contains("terms")) {
    for (const auto& a : j.at("terms"))
      d.terms.push_back(
          {a.at("name").get<std::string>(), a.at("over").get<std::string>()});
  }
  return d;
}

Json structure_to_json(const Structure& s) {
  Json types = Json::array(), terms = Json::array();
  for (const auto& t : s.to_decl().types)
    types.push_back({{"name", t.name},
                     {"degree", t.degree},
                     {"boundary", t.boundary ? Json(*t.boundary) : Json()}});
  for (const auto& a : s.to_decl().terms)
    terms.push_back({{"name", a.name}, {"over", a.over}});
  return {{"types", types}, {"terms", terms}};
}

StructurePtr load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  try {
    return make_structure(parse_structure_json(j));
  } catch (const Json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

StructurePtr terminal(int maxdeg) {
  if (maxdeg < 1) throw std::invalid_argument("terminal needs maxdeg >= 1");
  StructureBuilder b;
  TypeId prev = kNone;
  for (int n = 1; n <= maxdeg; ++n) {
    prev = b.add_type(n, prev, "U" + std::to_string(n));
    b.add_term(prev, "u" + std::to_string(n));
  }
  return b.build();
}

StructurePtr representable(int n) {
  if (n < 1) throw std::invalid_argument("representable needs n >= 1");
  StructureBuilder b;
  TypeId prev = kNone;
  for (int i = 1; i <= n; ++i) prev = b.add_type(i, prev, "R" + std::to_string(i));
  return b.build();
}

// ---------------------------------------------------------------------------

Map::Map(StructurePtr source, StructurePtr target, std::vector<TypeId> types,
         std::vector<TermId> terms)
    : source_(std::move(source)),
      target_(std::move(target)),
      types_(std::move(types)),
      terms_(std::move(terms)) {
  if (types_.size() != source_->type_count() ||
      terms_.size() != source_->term_count())
    throw std::invalid_argument("map assignment does not cover the source");
}

Map Map::identity(StructurePtr s) {
  std::vector<TypeId> t(s->type_count());
  std::vector<TermId> a(s->term_count());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<TypeId>(i);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<TermId>(i);
  return Map(s, s, std::move(t), std::move(a));
}

Map Map::checked(StructurePtr source, StructurePtr target,
                 std::vector<TypeId> types, std::vector<TermId> terms) {
  Map m(std::move(source), std::move(target), std::move(types),
        std::move(terms));
  if (auto d = m.defect()) throw std::invalid_argument(*d);
  return m;
}

std::optional<std::string> Map::defect() const {
  const auto& s = *source_;
  const auto& t = *target_;
  const auto nt = static_cast<TypeId>(t.type_count());
  for (TypeId x = 0; x < static_cast<TypeId>(s.type_count()); ++x) {
    TypeId y = types_[x];
    if (y < 0 || y >= nt) return "type " + s.type_name(x) + " unassigned";
    if (t.degree(y) != s.degree(x))
      return "degree not preserved at " + s.type_name(x);
    if (s.boundary(x) != kNone && t.boundary(y) != types_[s.boundary(x)])
      return "boundary not preserved at " + s.type_name(x);
  }
  for (TermId a = 0; a < static_cast<TermId>(s.term_count()); ++a) {
    TermId b = terms_[a];
    if (b < 0 || b >= static_cast<TermId>(t.term_count()))
      return "term " + s.term_name(a) + " unassigned";
    if (t.term_type(b) != types_[s.term_type(a)])
      return "term boundary not preserved at " + s.term_name(a);
  }
  return std::nullopt;
}

Map compose(const Map& g, const Map& f) {
  if (f.target()->type_count() != g.source()->type_count() ||
      f.target()->term_count() != g.source()->term_count())
    throw std::invalid_argument("maps are not composable");
  std::vector<TypeId> t(f.type_assignment().size());
  std::vector<TermId> a(f.term_assignment().size());
  // Unassigned entries (elements beyond a truncation) stay unassigned.
  for (std::size_t i = 0; i < t.size(); ++i) {
    const TypeId y = f.type_assignment()[i];
    t[i] = y == kNone ? kNone : g.type(y);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const TermId y = f.term_assignment()[i];
    a[i] = y == kNone ? kNone : g.term(y);
  }
  return Map(f.source(), g.target(), std::move(t), std::move(a));
}

namespace {

// Types are visited in id order; a boundary always has a smaller id than
// its coface, so the candidate set of each type is already determined.
template <class Visit>
void enumerate_type_assignments(const Structure& a, const Structure& x,
                                std::vector<TypeId>& current, std::size_t i,
                                Visit& visit) {
  if (i == a.type_count()) {
    visit(current);
    return;
  }
  const auto t = static_cast<TypeId>(i);
  std::span<const TypeId> candidates = a.boundary(t) == kNone
                                           ? x.types_at(1)
                                           : x.cofaces(current[a.boundary(t)]);
  for (TypeId c : candidates) {
    current[i] = c;
    enumerate_type_assignments(a, x, current, i + 1, visit);
  }
}

}  // namespace

std::vector<Map> hom_enumerate(const StructurePtr& a, const StructurePtr& x) {
  std::vector<Map> out;
  std::vector<TypeId> types(a->type_count());
  auto visit = [&](const std::vector<TypeId>& ty) {
    const auto nterms = a->term_count();
    std::vector<TermId> terms(nterms);
    // Odometer over the independent term choices.
    std::vector<std::size_t> pos(nterms, 0);
    for (std::size_t k = 0; k < nterms; ++k)
      if (x->terms_over(ty[a->term_type(static_cast<TermId>(k))]).empty())
        return;
    while (true) {
      for (std::size_t k = 0; k < nterms; ++k)
        terms[k] = x->terms_over(ty[a->term_type(static_cast<TermId>(k))])[pos[k]];
      out.emplace_back(a, x, ty, terms);
      std::size_t k = nterms;
      while (k > 0) {
        --k;
        auto avail = x->terms_over(ty[a->term_type(static_cast<TermId>(k))]).size();
        if (++pos[k] < avail) break;
        pos[k] = 0;
        if (k == 0) return;
      }
      if (nterms == 0) return;
    }
  };
  enumerate_type_assignments(*a, *x, types, 0, visit);
  return out;
}

std::size_t hom_count(const Structure& a, const Structure& x) {
  std::size_t total = 0;
  std::vector<TypeId> types(a.type_count());
  auto visit = [&](const std::vector<TypeId>& ty) {
    std::size_t n = 1;
    for (TermId k = 0; k < static_cast<TermId>(a.term_count()); ++k)
      n *= x.terms_over(ty[a.term_type(k)]).size();
    total += n;
  };
  enumerate_type_assignments(a, x, types, 0, visit);
  return total;
}

Map bang(const StructurePtr& x, const StructurePtr& term) {
  if (x->max_degree() > term->max_degree())
    throw std::invalid_argument("terminal object too small for structure");
  std::vector<TypeId> t(x->type_count());
  std::vector<TermId> a(x->term_count());
  for (TypeId i = 0; i < static_cast<TypeId>(t.size()); ++i) {
    auto at = term->types_at(x->degree(i));
    if (at.size() != 1) throw std::invalid_argument("not a terminal structure");
    t[i] = at[0];
  }
  for (TermId i = 0; i < static_cast<TermId>(a.size()); ++i) {
    auto over = term->terms_over(t[x->term_type(i)]);
    if (over.size() != 1) throw std::invalid_argument("not a terminal structure");
    a[i] = over[0];
  }
  return Map(x, term, std::move(t), std::move(a));
}

Map map_by_name(const StructurePtr& x, const StructurePtr& z,
                const std::map<std::string, std::string>& rename) {
  auto target = [&](const std::string& name) {
    auto it = rename.find(name);
    return it == rename.end() ? name : it->second;
  };
  std::vector<TypeId> t;
  for (TypeId i = 0; i < static_cast<TypeId>(x->type_count()); ++i) {
    auto id = z->find_type(target(x->type_name(i)));
    if (!id) throw std::invalid_argument("no type for " + x->type_name(i) + " in the target");
    t.push_back(*id);
  }
  std::vector<TermId> a;
  for (TermId i = 0; i < static_cast<TermId>(x->term_count()); ++i) {
    auto id = z->find_term(target(x->term_name(i)));
    if (!id) throw std::invalid_argument("no term for " + x->term_name(i) + " in the target");
    a.push_back(*id);
  }
  return Map::checked(x, z, std::move(t), std::move(a));
}

// ---------------------------------------------------------------------------

SquareCheck check_pullback(const Map& f, const Map& g, const Map& p,
                           const Map& q, int max_degree) {
  const Structure& P = *f.source();
  const Structure& X = *p.source();
  const Structure& Y = *q.source();
  if (g.source()->type_count() != P.type_count() ||
      f.target()->type_count() != X.type_count() ||
      g.target()->type_count() != Y.type_count() ||
      p.target()->type_count() != q.target()->type_count())
    throw std::invalid_argument("maps do not form a square");

  auto in_range = [&](const Structure& s, TypeId t) {
    return s.degree(t) <= max_degree;
  };
  SquareCheck out;
  // Truncated maps may leave elements unassigned; inside the range that is
  // reported as a failure to commute.
  auto unassigned = [&](const Structure& s, const Map& m, const char* name) {
    for (TypeId e = 0; e < static_cast<TypeId>(s.type_count()); ++e)
      if (in_range(s, e) && m.type(e) == kNone) {
        out.status = SquareCheck::Status::not_commuting;
        out.degree = s.degree(e);
        out.witness = std::string(name) + " leaves type " + s.type_name(e) + " unassigned";
        return true;
      }
    for (TermId e = 0; e < static_cast<TermId>(s.term_count()); ++e)
      if (in_range(s, s.term_type(e)) && m.term(e) == kNone) {
        out.status = SquareCheck::Status::not_commuting;
        out.at_term = true;
        out.degree = s.degree(s.term_type(e));
        out.witness = std::string(name) + " leaves term " + s.term_name(e) + " unassigned";
        return true;
      }
    return false;
  };
  if (unassigned(P, f, "f") || unassigned(P, g, "g") || unassigned(X, p, "p") ||
      unassigned(Y, q, "q"))
    return out;
  for (TypeId e = 0; e < static_cast<TypeId>(P.type_count()); ++e) {
    if (!in_range(P, e)) continue;
    if (p.type(f.type(e)) != q.type(g.type(e))) {
      out.status = SquareCheck::Status::not_commuting;
      out.degree = P.degree(e);
      out.witness = "square does not commute at type " + P.type_name(e);
      return out;
    }
  }
  for (TermId e = 0; e < static_cast<TermId>(P.term_count()); ++e) {
    if (!in_range(P, P.term_type(e))) continue;
    if (p.term(f.term(e)) != q.term(g.term(e))) {
      out.status = SquareCheck::Status::not_commuting;
      out.at_term = true;
      out.degree = P.degree(P.term_type(e));
      out.witness = "square does not commute at term " + P.term_name(e);
      return out;
    }
  }

  auto key = [](int x, int y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint32_t>(y);
  };
  std::unordered_map<std::uint64_t, std::size_t> type_pre, term_pre;
  for (TypeId e = 0; e < static_cast<TypeId>(P.type_count()); ++e)
    if (in_range(P, e)) ++type_pre[key(f.type(e), g.type(e))];
  for (TermId e = 0; e < static_cast<TermId>(P.term_count()); ++e)
    if (in_range(P, P.term_type(e))) ++term_pre[key(f.term(e), g.term(e))];

  // Fibres of q over Z, for types and terms.
  const Structure& Z = *p.target();
  std::vector<std::vector<TypeId>> q_types(Z.type_count());
  std::vector<std::vector<TermId>> q_terms(Z.term_count());
  for (TypeId y = 0; y < static_cast<TypeId>(Y.type_count()); ++y)
    if (in_range(Y, y)) q_types[q.type(y)].push_back(y);
  for (TermId y = 0; y < static_cast<TermId>(Y.term_count()); ++y)
    if (in_range(Y, Y.term_type(y))) q_terms[q.term(y)].push_back(y);

  auto fail = [&](bool term, int degree, int x, int y, std::size_t n) {
    out.status = SquareCheck::Status::not_pullback;
    out.at_term = term;
    out.degree = degree;
    out.x = x;
    out.y = y;
    out.preimages = n;
    std::ostringstream w;
    w << (n == 0 ? "no preimage" : std::to_string(n) + " preimages")
      << " for " << (term ? "term" : "type") << " pair ("
      << (term ? X.term_name(x) : X.type_name(x)) << ", "
      << (term ? Y.term_name(y) : Y.type_name(y)) << ") at degree " << degree;
    out.witness = w.str();
  };

  std::vector<std::vector<TermId>> x_terms_by_degree(X.max_degree() + 1);
  for (TermId a = 0; a < static_cast<TermId>(X.term_count()); ++a)
    x_terms_by_degree[X.degree(X.term_type(a))].push_back(a);

  const int top = std::min(X.max_degree(), max_degree);
  for (int n = 1; n <= top; ++n) {
    for (TypeId x : X.types_at(n)) {
      for (TypeId y : q_types[p.type(x)]) {
        auto it = type_pre.find(key(x, y));
        std::size_t c = it == type_pre.end() ? 0 : it->second;
        if (c != 1) {
          fail(false, n, x, y, c);
          return out;
        }
      }
    }
    for (TermId x : x_terms_by_degree[n]) {
      for (TermId y : q_terms[p.term(x)]) {
        auto it = term_pre.find(key(x, y));
        std::size_t c = it == term_pre.end() ? 0 : it->second;
        if (c != 1) {
          fail(true, n, x, y, c);
          return out;
        }
      }
    }
  }
  return out;
}

bool is_pullback(const Map& f, const Map& g, const Map& p, const Map& q,
                 int max_degree) {
  auto r = check_pullback(f, g, p, q, max_degree);
  if (r.status == SquareCheck::Status::not_commuting)
    throw std::invalid_argument(r.witness);
  return r.ok();
}

FibreProduct fibre_product(const Map& p, const Map& q) {
  const Structure& X = *p.source();
  const Structure& Y = *q.source();
  if (p.target()->type_count() != q.target()->type_count())
    throw std::invalid_argument("cospan legs have different targets");
  const Structure& Z = *p.target();
  std::vector<std::vector<TypeId>> q_types(Z.type_count());
  std::vector<std::vector<TermId>> q_terms(Z.term_count());
  for (TypeId y = 0; y < static_cast<TypeId>(Y.type_count()); ++y)
    q_types[q.type(y)].push_back(y);
  for (TermId y = 0; y < static_cast<TermId>(Y.term_count()); ++y)
    q_terms[q.term(y)].push_back(y);

  StructureBuilder b;
  std::map<std::pair<TypeId, TypeId>, TypeId> ids;
  std::vector<TypeId> lt, rt;
  std::vector<TermId> la, ra;
  for (int n = 1; n <= X.max_degree(); ++n) {
    for (TypeId x : X.types_at(n)) {
      for (TypeId y : q_types[p.type(x)]) {
        TypeId bd = kNone;
        if (n > 1) bd = ids.at({X.boundary(x), Y.boundary(y)});
        ids[{x, y}] = b.add_type(
            n, bd, "(" + X.type_name(x) + "," + Y.type_name(y) + ")");
        lt.push_back(x);
        rt.push_back(y);
      }
    }
  }
  for (TermId a = 0; a < static_cast<TermId>(X.term_count()); ++a) {
    for (TermId c : q_terms[p.term(a)]) {
      b.add_term(ids.at({X.term_type(a), Y.term_type(c)}),
                 "(" + X.term_name(a) + "," + Y.term_name(c) + ")");
      la.push_back(a);
      ra.push_back(c);
    }
  }
  auto apex = b.build();
  return {apex, Map(apex, p.source(), lt, la), Map(apex, q.source(), rt, ra)};
}

}  // namespace gatmonad
