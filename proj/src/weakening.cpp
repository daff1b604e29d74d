#include "gatmonad/weakening.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace gatmonad {

std::size_t WTypeHash::operator()(const WType& e) const {
  std::size_t h = e.labels.size();
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (int p : e.heap.parents()) mix(static_cast<std::size_t>(p));
  for (TypeId t : e.labels) mix(static_cast<std::size_t>(t));
  return h;
}

struct WeakeningImage::Data {
  StructurePtr base;
  bool projections = false;
  std::string labels_key;
  std::vector<WType> types;
  std::vector<WTerm> terms;
  std::vector<TermId> first_term;  // per type, plus a sentinel
  std::unordered_map<WType, TypeId, WTypeHash> index;
};

namespace {

Json type_payload_json(const Structure& x, const WType& e,
                       const std::string& key = "labels") {
  Json labels = Json::array();
  for (TypeId t : e.labels) labels.push_back(x.type_json(t));
  return {{"heap", to_json(e.heap)}, {key, labels}};
}

std::optional<WType> parse_wtype(const Structure& x, const Json& j,
                                 const std::string& key = "labels") {
  if (!j.is_object() || !j.contains("heap") || !j.contains(key))
    return std::nullopt;
  WType e;
  try {
    e.heap = heap_from_json(j.at("heap"));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  const Json& labels = j.at(key);
  if (!labels.is_array()) return std::nullopt;
  for (const auto& l : labels) {
    auto t = x.parse_type(l);
    if (!t) return std::nullopt;
    e.labels.push_back(*t);
  }
  return e;
}

class WCodec : public ElementCodec {
 public:
  explicit WCodec(std::shared_ptr<const WeakeningImage::Data> d) : d_(std::move(d)) {}

  Json type_json(TypeId id) const override {
    Json j = type_payload_json(*d_->base, d_->types[id], d_->labels_key);
    j["term"] = nullptr;
    return j;
  }

  Json term_json(TermId id) const override {
    const WTerm& t = d_->terms[id];
    Json j = type_payload_json(*d_->base, d_->types[t.type], d_->labels_key);
    j["term"] = payload_json(*d_->base, t.payload, d_->projections);
    return j;
  }

  std::optional<TypeId> parse_type(const Json& j) const override {
    if (j.is_object() && j.contains("term") && !j.at("term").is_null())
      return std::nullopt;
    auto e = parse_wtype(*d_->base, j, d_->labels_key);
    if (!e) return std::nullopt;
    auto it = d_->index.find(*e);
    if (it == d_->index.end()) return std::nullopt;
    return it->second;
  }

  std::optional<TermId> parse_term(const Json& j) const override {
    auto e = parse_wtype(*d_->base, j, d_->labels_key);
    if (!e || !j.contains("term")) return std::nullopt;
    auto it = d_->index.find(*e);
    if (it == d_->index.end()) return std::nullopt;
    const Json& tj = j.at("term");
    Payload p;
    if (d_->projections) {
      if (!tj.is_object()) return std::nullopt;
      if (tj.contains("proj") && tj.at("proj").is_number_integer()) {
        p = Proj{tj.at("proj").get<int>()};
      } else if (tj.contains("term")) {
        auto a = d_->base->parse_term(tj.at("term"));
        if (!a) return std::nullopt;
        p = Var{*a};
      } else {
        return std::nullopt;
      }
    } else {
      auto a = d_->base->parse_term(tj);
      if (!a) return std::nullopt;
      p = Var{*a};
    }
    for (TermId k = d_->first_term[it->second]; k < d_->first_term[it->second + 1]; ++k)
      if (d_->terms[k].payload == p) return k;
    return std::nullopt;
  }

 private:
  std::shared_ptr<const WeakeningImage::Data> d_;
};

}  // namespace

Json payload_json(const Structure& x, const Payload& p, bool tagged) {
  if (const auto* v = std::get_if<Var>(&p)) {
    if (tagged) return {{"term", x.term_json(v->term)}};
    return x.term_json(v->term);
  }
  return {{"proj", std::get<Proj>(p).index}};
}

std::optional<WType> wtype_from_json(const Structure& x, const Json& j) {
  return parse_wtype(x, j);
}

std::optional<Payload> parse_payload(const Structure& x, const Json& j, bool tagged) {
  if (!tagged) {
    if (auto a = x.parse_term(j)) return Var{*a};
    return std::nullopt;
  }
  if (!j.is_object()) return std::nullopt;
  if (j.contains("proj") && j.at("proj").is_number_integer()) return Proj{j.at("proj").get<int>()};
  if (j.contains("term"))
    if (auto a = x.parse_term(j.at("term"))) return Var{*a};
  return std::nullopt;
}

Json to_json(const Structure& x, const WType& e) {
  Json j = type_payload_json(x, e);
  j["term"] = nullptr;
  return j;
}

WImagePtr WeakeningImage::build(StructurePtr base, int bound, bool projections,
                                std::string labels_key) {
  std::shared_ptr<WeakeningImage> img(new WeakeningImage(base, bound, projections));
  auto d = std::make_shared<Data>();
  d->base = base;
  d->projections = projections;
  d->labels_key = std::move(labels_key);
  const Structure& x = *base;

  StructureBuilder b;
  std::vector<TypeId> prev;
  for (int n = 1; n <= bound; ++n) {
    std::vector<std::pair<WType, TypeId>> level;
    if (n == 1) {
      for (TypeId t : x.types_at(1)) level.push_back({WType{Heap({0}), {t}}, kNone});
    } else {
      for (TypeId id : prev) {
        const WType& e = d->types[id];
        for (int p = 0; p < n; ++p) {
          auto cands = p == 0 ? x.types_at(1) : x.cofaces(e.labels[p - 1]);
          if (cands.empty()) continue;
          std::vector<int> parents = e.heap.parents();
          parents.push_back(p);
          Heap h(std::move(parents));
          for (TypeId c : cands) {
            std::vector<TypeId> labels = e.labels;
            labels.push_back(c);
            level.push_back({WType{h, std::move(labels)}, id});
          }
        }
      }
    }
    if (level.empty()) break;
    std::sort(level.begin(), level.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    prev.clear();
    for (auto& [e, bd] : level) {
      const TypeId id = b.add_type(n, bd);
      d->index.emplace(e, id);
      d->types.push_back(std::move(e));
      prev.push_back(id);
    }
  }

  for (TypeId t = 0; t < static_cast<TypeId>(d->types.size()); ++t) {
    d->first_term.push_back(static_cast<TermId>(d->terms.size()));
    const WType& e = d->types[t];
    for (TermId a : x.terms_over(e.labels.back())) {
      d->terms.push_back({t, Var{a}});
      b.add_term(t);
    }
    if (projections) {
      for (int i = 1; i < e.heap.size(); ++i) {
        if (projection_allowed(e, i)) {
          d->terms.push_back({t, Proj{i}});
          b.add_term(t);
        }
      }
    }
  }
  d->first_term.push_back(static_cast<TermId>(d->terms.size()));

  b.set_codec(std::make_shared<WCodec>(d));
  img->data_ = d;
  img->set_structure(b.build());
  return img;
}

const WType& WeakeningImage::type(TypeId t) const { return data_->types.at(t); }
const WTerm& WeakeningImage::term(TermId a) const { return data_->terms.at(a); }

std::optional<TypeId> WeakeningImage::find(const WType& e) const {
  auto it = data_->index.find(e);
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::optional<TermId> WeakeningImage::find_term(TypeId t, const Payload& p) const {
  for (TermId k = data_->first_term[t]; k < data_->first_term[t + 1]; ++k)
    if (data_->terms[k].payload == p) return k;
  return std::nullopt;
}

WImagePtr apply_W(StructurePtr x, int bound) {
  return WeakeningImage::build(std::move(x), bound, false);
}

bool is_valid(const Structure& x, const WType& e) {
  const int n = e.heap.size();
  if (static_cast<int>(e.labels.size()) != n || n == 0) return false;
  for (int i = 1; i <= n; ++i) {
    const TypeId t = e.labels[i - 1];
    if (t < 0 || t >= static_cast<TypeId>(x.type_count())) return false;
    if (x.degree(t) != depth(e.heap, i)) return false;
    const int p = e.heap.parent(i);
    if (p > 0 && x.boundary(t) != e.labels[p - 1]) return false;
  }
  return true;
}

bool projection_allowed(const WType& e, int i) {
  const int n = e.heap.size();
  return i >= 1 && i < n && e.heap.parent(n) == e.heap.parent(i) &&
         e.labels[n - 1] == e.labels[i - 1];
}

WType unit_W(const Structure& x, TypeId a) {
  const int n = x.degree(a);
  WType e{Heap::linear(n), std::vector<TypeId>(n)};
  for (int i = 1; i <= n; ++i) e.labels[i - 1] = x.iterated_boundary(a, n - i);
  return e;
}

Map unit_map(const WeakeningImage& img) {
  const Structure& x = *img.base();
  std::vector<TypeId> types(x.type_count(), kNone);
  std::vector<TermId> terms(x.term_count(), kNone);
  for (TypeId t = 0; t < static_cast<TypeId>(types.size()); ++t)
    if (x.degree(t) <= img.bound())
      if (auto id = img.find(unit_W(x, t))) types[t] = *id;
  for (TermId a = 0; a < static_cast<TermId>(terms.size()); ++a) {
    const TypeId t = types[x.term_type(a)];
    if (t != kNone)
      if (auto id = img.find_term(t, Var{a})) terms[a] = *id;
  }
  return Map(img.base(), img.structure(), std::move(types), std::move(terms));
}

WType mult_W(const WeakeningImage& inner, const WType& outer, Mutation m) {
  const Heap& psi = outer.heap;
  const int n = psi.size();
  std::vector<Heap> family;
  family.reserve(n);
  for (TypeId l : outer.labels) family.push_back(inner.type(l).heap);
  WType out;
  out.heap = m == Mutation::w_mult_keeps_outer_heap ? psi : star(psi, family);
  out.labels.resize(n);
  for (int i = 1; i <= n; ++i)
    out.labels[i - 1] = inner.type(outer.labels[i - 1]).labels[depth(psi, i) - 1];
  return out;
}

namespace {

int iterate_parent(const Heap& h, int node, int steps) {
  while (steps-- > 0) node = h.parent(node);
  return node;
}

}  // namespace

Payload mult_payload(const WeakeningImage& inner, const WType& outer,
                     const Payload& p, Mutation m) {
  const Heap& psi = outer.heap;
  const int n = psi.size();
  const bool swap = m == Mutation::p_mult_swap_proj;
  if (const auto* pr = std::get_if<Proj>(&p)) {
    if (swap) return Proj{iterate_parent(psi, n, depth(psi, n) - pr->index)};
    return *pr;
  }
  const Payload& q = inner.term(std::get<Var>(p).term).payload;
  if (const auto* pr = std::get_if<Proj>(&q)) {
    if (swap) return *pr;
    return Proj{iterate_parent(psi, n, depth(psi, n) - pr->index)};
  }
  return q;
}

Map mult_map(const WeakeningImage& outer, const WeakeningImage& inner, Mutation m) {
  if (outer.base() != inner.structure())
    throw std::invalid_argument("μ needs an image of the inner image");
  const Structure& s = *outer.structure();
  std::vector<TypeId> types(s.type_count(), kNone);
  std::vector<TermId> terms(s.term_count(), kNone);
  for (TypeId t = 0; t < static_cast<TypeId>(types.size()); ++t) {
    WType r;
    try {
      r = mult_W(inner, outer.type(t), m);
    } catch (const std::invalid_argument&) {
      continue;  // only reachable under a mutation
    }
    if (auto id = inner.find(r)) types[t] = *id;
  }
  for (TermId a = 0; a < static_cast<TermId>(terms.size()); ++a) {
    const WTerm& e = outer.term(a);
    if (types[e.type] == kNone) continue;
    Payload p = mult_payload(inner, outer.type(e.type), e.payload, m);
    if (auto id = inner.find_term(types[e.type], p)) terms[a] = *id;
  }
  return Map(outer.structure(), inner.structure(), std::move(types), std::move(terms));
}

Map fmap(const Map& f, const WeakeningImage& src, const WeakeningImage& dst) {
  if (f.source() != src.base() || f.target() != dst.base())
    throw std::invalid_argument("fmap: map does not match the images");
  const Structure& s = *src.structure();
  std::vector<TypeId> types(s.type_count(), kNone);
  std::vector<TermId> terms(s.term_count(), kNone);
  for (TypeId t = 0; t < static_cast<TypeId>(types.size()); ++t) {
    WType e = src.type(t);
    bool ok = true;
    for (auto& l : e.labels) {
      l = f.type(l);
      ok = ok && l != kNone;
    }
    if (!ok) continue;
    if (auto id = dst.find(e)) types[t] = *id;
  }
  for (TermId a = 0; a < static_cast<TermId>(terms.size()); ++a) {
    const WTerm& e = src.term(a);
    if (types[e.type] == kNone) continue;
    Payload p = e.payload;
    if (auto* v = std::get_if<Var>(&p)) {
      v->term = f.term(v->term);
      if (v->term == kNone) continue;
    }
    if (auto id = dst.find_term(types[e.type], p)) terms[a] = *id;
  }
  return Map(src.structure(), dst.structure(), std::move(types), std::move(terms));
}

namespace {

std::vector<Expression> ancestor_args(const Heap& h, int i) {
  std::vector<Expression> args;
  auto down = downset(h, i);
  for (std::size_t k = 0; k + 1 < down.size(); ++k)
    args.push_back(Expression::canonical_variable(down[k]));
  return args;
}

std::vector<ContextEntry> render_context(const Structure& x, const WType& e) {
  std::vector<ContextEntry> ctx;
  for (int i = 1; i < e.heap.size(); ++i)
    ctx.push_back({"x" + std::to_string(i),
                   Expression::apply(x.type_name(e.labels[i - 1]),
                                     ancestor_args(e.heap, i))});
  return ctx;
}

}  // namespace

Judgement render_judgement(const Structure& x, const WType& e) {
  const int n = e.heap.size();
  return Judgement::type_judgement(
      render_context(x, e),
      Expression::apply(x.type_name(e.labels[n - 1]), ancestor_args(e.heap, n)));
}

Judgement render_term_judgement(const Structure& x, const WType& e,
                                const Payload& p) {
  const int n = e.heap.size();
  auto args = ancestor_args(e.heap, n);
  Expression ty = Expression::apply(x.type_name(e.labels[n - 1]), args);
  Expression t = std::holds_alternative<Var>(p)
                     ? Expression::apply(x.term_name(std::get<Var>(p).term), args)
                     : Expression::canonical_variable(std::get<Proj>(p).index);
  return Judgement::term_judgement(render_context(x, e), std::move(t), std::move(ty));
}

}  // namespace gatmonad
