#include "gatmonad/substitution.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace gatmonad {

TermId SType::gap(int i) const {
  for (const auto& [d, a] : gaps)
    if (d == i) return a;
  return kNone;
}

struct SubstitutionImage::Data {
  StructurePtr base;
  std::vector<SType> types;
  std::vector<STerm> terms;
  std::vector<TermId> first_term;
  std::map<SType, TypeId> index;
};

Json to_json(const Structure& x, const SType& e) {
  Json gaps = Json::object();
  for (const auto& [i, a] : e.gaps) gaps[std::to_string(i)] = x.term_json(a);
  return {{"inc", to_json(e.inc)},
          {"head", x.type_json(e.head)},
          {"gaps", gaps},
          {"term", nullptr}};
}

std::optional<SType> stype_from_json(const Structure& x, const Json& j) {
  if (!j.is_object() || !j.contains("inc") || !j.contains("head")) return std::nullopt;
  SType e;
  try {
    e.inc = inclist_from_json(j.at("inc"));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  auto head = x.parse_type(j.at("head"));
  if (!head) return std::nullopt;
  e.head = *head;
  if (j.contains("gaps")) {
    const Json& g = j.at("gaps");
    if (!g.is_object()) return std::nullopt;
    for (const auto& [key, val] : g.items()) {
      int i = 0;
      try {
        std::size_t used = 0;
        i = std::stoi(key, &used);
        if (used != key.size()) return std::nullopt;
      } catch (const std::exception&) {
        return std::nullopt;
      }
      auto a = x.parse_term(val);
      if (!a) return std::nullopt;
      e.gaps.push_back({i, *a});
    }
  }
  std::sort(e.gaps.begin(), e.gaps.end());
  if (!is_valid(x, e)) return std::nullopt;
  return e;
}

namespace {

class SCodec : public ElementCodec {
 public:
  explicit SCodec(std::shared_ptr<const SubstitutionImage::Data> d) : d_(std::move(d)) {}

  Json type_json(TypeId id) const override { return to_json(*d_->base, d_->types[id]); }

  Json term_json(TermId id) const override {
    const STerm& t = d_->terms[id];
    Json j = to_json(*d_->base, d_->types[t.type]);
    j["term"] = d_->base->term_json(t.term);
    return j;
  }

  std::optional<TypeId> parse_type(const Json& j) const override {
    if (j.is_object() && j.contains("term") && !j.at("term").is_null())
      return std::nullopt;
    auto e = stype_from_json(*d_->base, j);
    if (!e) return std::nullopt;
    auto it = d_->index.find(*e);
    if (it == d_->index.end()) return std::nullopt;
    return it->second;
  }

  std::optional<TermId> parse_term(const Json& j) const override {
    auto e = stype_from_json(*d_->base, j);
    if (!e || !j.contains("term")) return std::nullopt;
    auto it = d_->index.find(*e);
    if (it == d_->index.end()) return std::nullopt;
    auto a = d_->base->parse_term(j.at("term"));
    if (!a) return std::nullopt;
    for (TermId k = d_->first_term[it->second]; k < d_->first_term[it->second + 1]; ++k)
      if (d_->terms[k].term == *a) return k;
    return std::nullopt;
  }

 private:
  std::shared_ptr<const SubstitutionImage::Data> d_;
};

}  // namespace

bool is_valid(const Structure& x, const SType& e) {
  const int n = e.inc.length();
  if (n == 0 || e.head < 0 || e.head >= static_cast<TypeId>(x.type_count()))
    return false;
  const int top = e.inc.last();
  if (x.degree(e.head) != top) return false;
  auto gaps = e.inc.gaps();
  if (gaps.size() != e.gaps.size()) return false;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    const auto& [i, a] = e.gaps[k];
    if (i != gaps[k] || a < 0 || a >= static_cast<TermId>(x.term_count())) return false;
    if (x.term_type(a) != x.iterated_boundary(e.head, top - i)) return false;
  }
  return true;
}

SType boundary(const Structure& x, const SType& e) {
  const int n = e.inc.length();
  if (n < 2) throw std::invalid_argument("degree-1 element has no boundary");
  SType b;
  b.inc = boundary(e.inc);
  b.head = x.iterated_boundary(e.head, e.inc.last() - b.inc.last());
  for (const auto& g : e.gaps)
    if (g.first < b.inc.last()) b.gaps.push_back(g);
  return b;
}

void for_each_stype(const Structure& x, int n, int max_inc,
                    const std::function<void(const SType&)>& visit) {
  const int top = std::min(x.max_degree(), max_inc);
  for (const IncList& a : enumerate_inclists(n, top)) {
    const auto gaps = a.gaps();
    for (TypeId head : x.types_at(a.last())) {
      std::vector<std::span<const TermId>> choices;
      bool empty = false;
      for (int i : gaps) {
        choices.push_back(x.terms_over(x.iterated_boundary(head, a.last() - i)));
        empty = empty || choices.back().empty();
      }
      if (empty) continue;
      std::vector<std::size_t> pick(gaps.size(), 0);
      while (true) {
        SType e{a, head, {}};
        for (std::size_t k = 0; k < gaps.size(); ++k)
          e.gaps.push_back({gaps[k], choices[k][pick[k]]});
        visit(e);
        int k = static_cast<int>(gaps.size()) - 1;
        while (k >= 0 && ++pick[k] == choices[k].size()) pick[k--] = 0;
        if (k < 0) break;
      }
    }
  }
}

SImagePtr SubstitutionImage::build(StructurePtr base, int bound, int max_inc) {
  std::shared_ptr<SubstitutionImage> img(new SubstitutionImage(base, bound));
  auto d = std::make_shared<Data>();
  d->base = base;
  const Structure& x = *base;
  const int top = std::min(x.max_degree(), max_inc);

  StructureBuilder b;
  for (int n = 1; n <= bound; ++n)
    for_each_stype(x, n, top, [&](const SType& e) {
      TypeId bd = kNone;
      if (n > 1) bd = d->index.at(boundary(x, e));
      const TypeId id = b.add_type(n, bd);
      d->index.emplace(e, id);
      d->types.push_back(e);
    });
  b.reserve_degree(bound);

  for (TypeId t = 0; t < static_cast<TypeId>(d->types.size()); ++t) {
    d->first_term.push_back(static_cast<TermId>(d->terms.size()));
    for (TermId a : x.terms_over(d->types[t].head)) {
      d->terms.push_back({t, a});
      b.add_term(t);
    }
  }
  d->first_term.push_back(static_cast<TermId>(d->terms.size()));

  b.set_codec(std::make_shared<SCodec>(d));
  img->data_ = d;
  img->set_structure(b.build());
  return img;
}

const SType& SubstitutionImage::type(TypeId t) const { return data_->types.at(t); }
const STerm& SubstitutionImage::term(TermId a) const { return data_->terms.at(a); }

std::optional<TypeId> SubstitutionImage::find(const SType& e) const {
  auto it = data_->index.find(e);
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::optional<TermId> SubstitutionImage::find_term(TypeId t, TermId base_term) const {
  for (TermId k = data_->first_term[t]; k < data_->first_term[t + 1]; ++k)
    if (data_->terms[k].term == base_term) return k;
  return std::nullopt;
}

SImagePtr apply_S(StructurePtr x, int bound) {
  return SubstitutionImage::build(std::move(x), bound);
}

SType unit_S(const Structure& x, TypeId a) {
  return SType{IncList::identity(x.degree(a)), a, {}};
}

Map unit_map(const SubstitutionImage& img) {
  const Structure& x = *img.base();
  std::vector<TypeId> types(x.type_count(), kNone);
  std::vector<TermId> terms(x.term_count(), kNone);
  for (TypeId t = 0; t < static_cast<TypeId>(types.size()); ++t)
    if (x.degree(t) <= img.bound())
      if (auto id = img.find(unit_S(x, t))) types[t] = *id;
  for (TermId a = 0; a < static_cast<TermId>(terms.size()); ++a) {
    const TypeId t = types[x.term_type(a)];
    if (t != kNone)
      if (auto id = img.find_term(t, a)) terms[a] = *id;
  }
  return Map(img.base(), img.structure(), std::move(types), std::move(terms));
}

SType mult_S(const SubstitutionImage& inner, const SType& outer, Mutation m) {
  const SType& mid = inner.type(outer.head);
  const IncList& alpha = outer.inc;
  const IncList& beta = mid.inc;
  if (beta.length() != alpha.last())
    throw std::invalid_argument("μ^S: inner inc-list has length " +
                                std::to_string(beta.length()) + ", expected " +
                                std::to_string(alpha.last()));
  if (outer.gaps.size() != alpha.gaps().size())
    throw std::invalid_argument("μ^S: outer gap terms do not match the inc-list");
  SType out{compose(beta, alpha), mid.head, {}};
  for (int i : out.inc.gaps()) {
    const int j = beta.position(i);
    if (j == 0) {
      out.gaps.push_back({i, mid.gap(i)});
    } else if (m != Mutation::s_mult_drop_outer_gaps) {
      out.gaps.push_back({i, inner.term(outer.gap(j)).term});
    }
  }
  return out;
}

Map mult_map(const SubstitutionImage& outer, const SubstitutionImage& inner, Mutation m) {
  if (outer.base() != inner.structure())
    throw std::invalid_argument("μ needs an image of the inner image");
  const Structure& s = *outer.structure();
  std::vector<TypeId> types(s.type_count(), kNone);
  std::vector<TermId> terms(s.term_count(), kNone);
  for (TypeId t = 0; t < static_cast<TypeId>(types.size()); ++t)
    if (auto id = inner.find(mult_S(inner, outer.type(t), m))) types[t] = *id;
  for (TermId a = 0; a < static_cast<TermId>(terms.size()); ++a) {
    const STerm& e = outer.term(a);
    if (types[e.type] == kNone) continue;
    if (auto id = inner.find_term(types[e.type], inner.term(e.term).term)) terms[a] = *id;
  }
  return Map(outer.structure(), inner.structure(), std::move(types), std::move(terms));
}

Map fmap(const Map& f, const SubstitutionImage& src, const SubstitutionImage& dst) {
  if (f.source() != src.base() || f.target() != dst.base())
    throw std::invalid_argument("fmap: map does not match the images");
  const Structure& s = *src.structure();
  std::vector<TypeId> types(s.type_count(), kNone);
  std::vector<TermId> terms(s.term_count(), kNone);
  for (TypeId t = 0; t < static_cast<TypeId>(types.size()); ++t) {
    SType e = src.type(t);
    e.head = f.type(e.head);
    bool ok = e.head != kNone;
    for (auto& g : e.gaps) {
      g.second = f.term(g.second);
      ok = ok && g.second != kNone;
    }
    if (!ok) continue;
    if (auto id = dst.find(e)) types[t] = *id;
  }
  for (TermId a = 0; a < static_cast<TermId>(terms.size()); ++a) {
    const STerm& e = src.term(a);
    const TermId fa = f.term(e.term);
    if (types[e.type] == kNone || fa == kNone) continue;
    if (auto id = dst.find_term(types[e.type], fa)) terms[a] = *id;
  }
  return Map(src.structure(), dst.structure(), std::move(types), std::move(terms));
}

namespace {

// e_1, ..., e_{top}.
std::vector<Expression> substituted_slots(const Structure& x, const SType& e, int top) {
  std::vector<Expression> slots;
  for (int k = 1; k <= top; ++k) {
    const int p = e.inc.position(k);
    if (p != 0) {
      slots.push_back(Expression::canonical_variable(p));
    } else {
      std::vector<Expression> args(slots.begin(), slots.end());
      slots.push_back(Expression::apply(x.term_name(e.gap(k)), std::move(args)));
    }
  }
  return slots;
}

std::vector<ContextEntry> render_context(const Structure& x, const SType& e,
                                         const std::vector<Expression>& slots) {
  std::vector<ContextEntry> ctx;
  const int n = e.inc.length();
  for (int l = 1; l < n; ++l) {
    const int al = e.inc.at(l);
    std::vector<Expression> args(slots.begin(), slots.begin() + (al - 1));
    ctx.push_back(
        {"x" + std::to_string(l),
         Expression::apply(x.type_name(x.iterated_boundary(e.head, e.inc.last() - al)),
                           std::move(args))});
  }
  return ctx;
}

}  // namespace

std::vector<Expression> head_arguments(const Structure& x, const SType& e) {
  return substituted_slots(x, e, e.inc.last() - 1);
}

Judgement render_judgement(const Structure& x, const SType& e) {
  auto slots = head_arguments(x, e);
  auto ctx = render_context(x, e, slots);
  return Judgement::type_judgement(std::move(ctx),
                                   Expression::apply(x.type_name(e.head), slots));
}

Judgement render_term_judgement(const Structure& x, const SType& e, TermId a) {
  auto slots = head_arguments(x, e);
  auto ctx = render_context(x, e, slots);
  return Judgement::term_judgement(std::move(ctx), Expression::apply(x.term_name(a), slots),
                                   Expression::apply(x.type_name(e.head), slots));
}

}  // namespace gatmonad
