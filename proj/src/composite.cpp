#include "gatmonad/composite.hpp"

#include <map>
#include <stdexcept>

namespace gatmonad {

const Payload& SPElement::gap(int i) const {
  for (const auto& g : gaps)
    if (g.first == i) return g.second;
  throw std::invalid_argument("no gap term at " + std::to_string(i));
}

bool is_valid(const Structure& y, const SPElement& e) {
  if (e.inc.length() == 0 || e.heap.size() != e.inc.last()) return false;
  const WType w{e.heap, e.labels};
  if (!is_valid(y, w)) return false;
  const auto gaps = e.inc.gaps();
  if (gaps.size() != e.gaps.size()) return false;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    const auto& [i, p] = e.gaps[k];
    if (i != gaps[k]) return false;
    const WType below{restrict(e.heap, i),
                      std::vector<TypeId>(e.labels.begin(), e.labels.begin() + i)};
    if (const auto* v = std::get_if<Var>(&p)) {
      if (v->term < 0 || v->term >= static_cast<TermId>(y.term_count())) return false;
      if (y.term_type(v->term) != e.labels[i - 1]) return false;
    } else if (!projection_allowed(below, std::get<Proj>(p).index)) {
      return false;
    }
  }
  if (e.term) {
    if (const auto* v = std::get_if<Var>(&*e.term)) {
      if (v->term < 0 || v->term >= static_cast<TermId>(y.term_count())) return false;
      if (y.term_type(v->term) != e.labels.back()) return false;
    } else if (!projection_allowed(w, std::get<Proj>(*e.term).index)) {
      return false;
    }
  }
  return true;
}

bool is_valid(const Structure& y, const PSElement& e) {
  const int n = e.heap.size();
  if (n == 0 || static_cast<int>(e.nodes.size()) != n) return false;
  for (int i = 1; i <= n; ++i) {
    const SType& s = e.nodes[i - 1];
    if (!is_valid(y, s) || s.inc.length() != depth(e.heap, i)) return false;
    const int p = e.heap.parent(i);
    if (p > 0 && boundary(y, s) != e.nodes[p - 1]) return false;
  }
  if (e.term) {
    if (const auto* v = std::get_if<Var>(&*e.term)) {
      if (v->term < 0 || v->term >= static_cast<TermId>(y.term_count())) return false;
      if (y.term_type(v->term) != e.nodes.back().head) return false;
    } else {
      const int i = std::get<Proj>(*e.term).index;
      if (i < 1 || i >= n || e.heap.parent(i) != e.heap.parent(n) ||
          e.nodes[i - 1] != e.nodes[n - 1])
        return false;
    }
  }
  return true;
}

bool projection_free(const SPElement& e) {
  for (const auto& g : e.gaps)
    if (std::holds_alternative<Proj>(g.second)) return false;
  return true;
}

bool nearly_projection_free(const SPElement& e) {
  for (const auto& g : e.gaps)
    if (std::holds_alternative<Proj>(g.second) && !is_leaf(e.heap, g.first)) return false;
  return true;
}

int contraction_root(const SPElement& e, int j) {
  while (j > 0 && !e.inc.contains(j)) {
    const auto* p = std::get_if<Proj>(&e.gap(j));
    if (!p) break;
    j = p->index;
  }
  return j;
}

SPElement contract(const SPElement& e) {
  std::vector<int> parents(e.heap.size());
  for (int i = 1; i <= e.heap.size(); ++i)
    parents[i - 1] = contraction_root(e, e.heap.parent(i));
  SPElement out = e;
  out.heap = Heap(std::move(parents));
  return out;
}

Heap alpha_star_heap(const IncList& a, const Heap& phi) {
  return from_order(a.length(),
                    [&](int i, int j) { return leq(phi, a.at(i), a.at(j)); });
}

std::vector<IncList> alpha_phi(const IncList& a, const Heap& phi) {
  const Heap ast = alpha_star_heap(a, phi);
  std::vector<IncList> out;
  for (int p = 1; p <= a.length(); ++p) {
    std::vector<int> v;
    for (int q : downset(ast, p)) v.push_back(depth(phi, a.at(q)));
    out.emplace_back(std::move(v));
  }
  return out;
}

PSElement alpha_star(const SPElement& e) {
  PSElement out;
  out.heap = alpha_star_heap(e.inc, e.heap);
  const auto lists = alpha_phi(e.inc, e.heap);
  for (int p = 1; p <= e.inc.length(); ++p) {
    const IncList& b = lists[p - 1];
    const auto v = downset(e.heap, e.inc.at(p));
    SType node{b, e.labels[e.inc.at(p) - 1], {}};
    for (int i : b.gaps()) {
      const int vi = v[i - 1];
      const auto* var = std::get_if<Var>(&e.gap(vi));
      if (!var)
        throw std::invalid_argument("gap term at " + std::to_string(vi) +
                                    " is a projection; contract first");
      node.gaps.push_back({i, var->term});
    }
    out.nodes.push_back(std::move(node));
  }
  return out;
}

PSElement delta(const SPElement& e, Mutation m) {
  PSElement out = alpha_star(m == Mutation::delta_skip_contract ? e : contract(e));
  if (e.term) {
    if (std::holds_alternative<Var>(*e.term)) {
      out.term = e.term;
    } else {
      const int r = contraction_root(e, std::get<Proj>(*e.term).index);
      if (e.inc.contains(r)) {
        out.term = Proj{e.inc.position(r)};
      } else {
        out.term = e.gap(r);
      }
    }
  }
  return out;
}

SPElement to_sp(const WeakeningImage& py, const SType& e, std::optional<TermId> term) {
  const WType& w = py.type(e.head);
  SPElement out{e.inc, w.heap, w.labels, {}, std::nullopt};
  for (const auto& [i, a] : e.gaps) out.gaps.push_back({i, py.term(a).payload});
  if (term) out.term = py.term(*term).payload;
  return out;
}

PSElement mult_P_values(const Heap& psi, const std::vector<PSElement>& family,
                        const std::optional<Payload>& outer_term, Mutation m) {
  const int n = psi.size();
  std::vector<Heap> heaps;
  for (const auto& f : family) heaps.push_back(f.heap);
  PSElement out;
  out.heap = m == Mutation::w_mult_keeps_outer_heap ? psi : star(psi, heaps);
  for (int i = 1; i <= n; ++i)
    out.nodes.push_back(family[i - 1].nodes[depth(psi, i) - 1]);
  if (outer_term) {
    const bool swap = m == Mutation::p_mult_swap_proj;
    auto lift = [&](int i) {
      int node = n;
      for (int s = depth(psi, n) - i; s > 0; --s) node = psi.parent(node);
      return Proj{node};
    };
    if (const auto* pr = std::get_if<Proj>(&*outer_term)) {
      out.term = swap ? Payload{lift(pr->index)} : Payload{*pr};
    } else {
      const auto& inner = family.back().term;
      if (!inner) throw std::invalid_argument("inner element carries no term");
      if (const auto* q = std::get_if<Proj>(&*inner)) {
        out.term = swap ? Payload{*q} : Payload{lift(q->index)};
      } else {
        out.term = inner;
      }
    }
  }
  return out;
}

PSElement unit_T(const Structure& x, TypeId a) {
  const int n = x.degree(a);
  PSElement out{Heap::linear(n), {}, std::nullopt};
  for (int i = 1; i <= n; ++i) out.nodes.push_back(unit_S(x, x.iterated_boundary(a, n - i)));
  return out;
}

PSElement unit_T_term(const Structure& x, TermId a) {
  PSElement out = unit_T(x, x.term_type(a));
  out.term = Var{a};
  return out;
}

TImagePtr CompositeImage::build(StructurePtr base, int bound) {
  std::shared_ptr<CompositeImage> img(new CompositeImage(base, bound));
  img->s_ = SubstitutionImage::build(base, bound);
  img->p_ = WeakeningImage::build(img->s_->structure(), bound, true, "nodes");
  img->set_structure(img->p_->structure());
  return img;
}

PSElement CompositeImage::type(TypeId t) const {
  const WType& w = p_->type(t);
  PSElement out{w.heap, {}, std::nullopt};
  for (TypeId l : w.labels) out.nodes.push_back(s_->type(l));
  return out;
}

PSElement CompositeImage::term(TermId a) const {
  const WTerm& w = p_->term(a);
  PSElement out = type(w.type);
  if (const auto* v = std::get_if<Var>(&w.payload)) {
    out.term = Var{s_->term(v->term).term};
  } else {
    out.term = w.payload;
  }
  return out;
}

std::optional<TypeId> CompositeImage::find(const PSElement& e) const {
  WType w{e.heap, {}};
  for (const auto& node : e.nodes) {
    auto id = s_->find(node);
    if (!id) return std::nullopt;
    w.labels.push_back(*id);
  }
  return p_->find(w);
}

std::optional<TermId> CompositeImage::find_term(const PSElement& e) const {
  if (!e.term) return std::nullopt;
  auto t = find(e);
  if (!t) return std::nullopt;
  Payload p = *e.term;
  if (const auto* v = std::get_if<Var>(&p)) {
    auto a = s_->find_term(p_->type(*t).labels.back(), v->term);
    if (!a) return std::nullopt;
    p = Var{*a};
  }
  return p_->find_term(*t, p);
}

TImagePtr apply_T(StructurePtr x, int bound) {
  return CompositeImage::build(std::move(x), bound);
}

Map unit_map(const CompositeImage& img) {
  const Structure& x = *img.base();
  std::vector<TypeId> types(x.type_count(), kNone);
  std::vector<TermId> terms(x.term_count(), kNone);
  for (TypeId t = 0; t < static_cast<TypeId>(types.size()); ++t)
    if (x.degree(t) <= img.bound())
      if (auto id = img.find(unit_T(x, t))) types[t] = *id;
  for (TermId a = 0; a < static_cast<TermId>(terms.size()); ++a)
    if (x.degree(x.term_type(a)) <= img.bound())
      if (auto id = img.find_term(unit_T_term(x, a))) terms[a] = *id;
  return Map(img.base(), img.structure(), std::move(types), std::move(terms));
}

PSElement mult_T(const CompositeImage& inner, const PSElement& outer, Mutation m) {
  const WeakeningImage& psx = inner.p();
  const SubstitutionImage& sx = inner.s();
  const int n = outer.heap.size();
  std::vector<PSElement> family;
  for (int i = 1; i <= n; ++i) {
    std::optional<TermId> t;
    if (i == n && outer.term)
      if (const auto* v = std::get_if<Var>(&*outer.term)) t = v->term;
    family.push_back(delta(to_sp(psx, outer.nodes[i - 1], t), m));
  }
  PSElement mid = mult_P_values(outer.heap, family, outer.term, m);
  PSElement out{mid.heap, {}, mid.term};
  for (const auto& node : mid.nodes) out.nodes.push_back(mult_S(sx, node, m));
  if (out.term)
    if (const auto* v = std::get_if<Var>(&*out.term)) out.term = Var{sx.term(v->term).term};
  return out;
}

Map mult_map(const CompositeImage& outer, const CompositeImage& inner, Mutation m) {
  if (outer.base() != inner.structure())
    throw std::invalid_argument("μ needs an image of the inner image");
  const Structure& s = *outer.structure();
  std::vector<TypeId> types(s.type_count(), kNone);
  std::vector<TermId> terms(s.term_count(), kNone);
  for (TypeId t = 0; t < static_cast<TypeId>(types.size()); ++t) {
    try {
      if (auto id = inner.find(mult_T(inner, outer.type(t), m))) types[t] = *id;
    } catch (const std::invalid_argument&) {
    }
  }
  for (TermId a = 0; a < static_cast<TermId>(terms.size()); ++a) {
    try {
      if (auto id = inner.find_term(mult_T(inner, outer.term(a), m))) terms[a] = *id;
    } catch (const std::invalid_argument&) {
    }
  }
  return Map(outer.structure(), inner.structure(), std::move(types), std::move(terms));
}

Map fmap(const Map& f, const CompositeImage& src, const CompositeImage& dst) {
  return fmap(fmap(f, src.s(), dst.s()), src.p(), dst.p());
}

namespace {

Expression rename(const Expression& e, const std::vector<int>& to) {
  if (e.is_variable()) {
    const int k = canonical_index(e.name());
    if (k < 1 || k > static_cast<int>(to.size()) || to[k - 1] < 1)
      throw std::invalid_argument("variable " + e.name() + " out of scope");
    return Expression::canonical_variable(to[k - 1]);
  }
  std::vector<Expression> args;
  for (const auto& a : e.args()) args.push_back(rename(a, to));
  return Expression::apply(e.name(), std::move(args));
}

std::vector<int> strict_ancestors(const Heap& h, int i) {
  auto d = downset(h, i);
  d.pop_back();
  return d;
}

Expression node_type(const Structure& x, const PSElement& e, int i) {
  const SType& s = e.nodes[i - 1];
  return rename(Expression::apply(x.type_name(s.head), head_arguments(x, s)),
                strict_ancestors(e.heap, i));
}

}  // namespace

Judgement render_judgement(const Structure& x, const PSElement& e) {
  const int n = e.heap.size();
  std::vector<ContextEntry> ctx;
  for (int i = 1; i < n; ++i) ctx.push_back({"x" + std::to_string(i), node_type(x, e, i)});
  Expression ty = node_type(x, e, n);
  if (!e.term) return Judgement::type_judgement(std::move(ctx), std::move(ty));
  Expression t;
  if (const auto* v = std::get_if<Var>(&*e.term)) {
    const SType& s = e.nodes.back();
    t = rename(Expression::apply(x.term_name(v->term), head_arguments(x, s)),
               strict_ancestors(e.heap, n));
  } else {
    t = Expression::canonical_variable(std::get<Proj>(*e.term).index);
  }
  return Judgement::term_judgement(std::move(ctx), std::move(t), std::move(ty));
}

namespace {

int max_variable(const Expression& e) {
  if (e.is_variable()) {
    const int k = canonical_index(e.name());
    if (k < 1) throw std::invalid_argument("non-canonical variable " + e.name());
    return k;
  }
  int m = 0;
  for (const auto& a : e.args()) m = std::max(m, max_variable(a));
  return m;
}

// Reads node i of degree dp from its type, already renamed to x1..x{dp-1}.
SType read_node(const Structure& x, const Expression& ty, int dp) {
  if (ty.is_variable()) throw std::invalid_argument("a type cannot be a variable");
  auto head = x.find_type(ty.name());
  if (!head) throw std::invalid_argument("unknown type " + ty.name());
  const int top = static_cast<int>(ty.args().size()) + 1;
  if (x.degree(*head) != top)
    throw std::invalid_argument(ty.name() + " applied to the wrong number of arguments");
  std::vector<int> inc;
  SType s;
  s.head = *head;
  for (int k = 1; k < top; ++k) {
    const Expression& arg = ty.args()[k - 1];
    if (arg.is_variable()) {
      if (canonical_index(arg.name()) != static_cast<int>(inc.size()) + 1)
        throw std::invalid_argument("variables out of order in " + to_string(ty));
      inc.push_back(k);
    } else {
      auto a = x.find_term(arg.name());
      if (!a) throw std::invalid_argument("unknown term " + arg.name());
      s.gaps.push_back({k, *a});
    }
  }
  inc.push_back(top);
  if (static_cast<int>(inc.size()) != dp)
    throw std::invalid_argument("context does not match " + to_string(ty));
  s.inc = IncList(std::move(inc));
  if (!is_valid(x, s)) throw std::invalid_argument("ill-typed " + to_string(ty));
  return s;
}

}  // namespace

PSElement extract_normal_form(const Structure& x, const Judgement& j) {
  if (j.form != Form::type && j.form != Form::term)
    throw std::invalid_argument("only type and term judgements have normal forms");
  const int n = j.degree();
  std::vector<Expression> types;
  for (int i = 1; i < n; ++i) {
    if (j.context[i - 1].var != "x" + std::to_string(i))
      throw std::invalid_argument("judgement is not α-canonical");
    types.push_back(j.context[i - 1].type);
  }
  types.push_back(j.form == Form::type ? j.subject : j.type);
  std::vector<int> parents(n);
  for (int i = 1; i <= n; ++i) {
    parents[i - 1] = max_variable(types[i - 1]);
    if (parents[i - 1] >= i) throw std::invalid_argument("variable out of scope");
  }
  PSElement e{Heap(std::move(parents)), {}, std::nullopt};
  for (int i = 1; i <= n; ++i) {
    const auto anc = strict_ancestors(e.heap, i);
    std::vector<int> back(i, 0);
    for (std::size_t l = 0; l < anc.size(); ++l) back[anc[l] - 1] = static_cast<int>(l) + 1;
    std::vector<int> to(back.begin(), back.end() - 1);
    Expression local;
    try {
      local = rename(types[i - 1], to);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("entry " + std::to_string(i) +
                                  " uses a variable that is not an ancestor");
    }
    e.nodes.push_back(read_node(x, local, depth(e.heap, i)));
  }
  if (j.form == Form::term) {
    if (j.subject.is_variable()) {
      e.term = Proj{canonical_index(j.subject.name())};
    } else {
      auto a = x.find_term(j.subject.name());
      if (!a) throw std::invalid_argument("unknown term " + j.subject.name());
      e.term = Var{*a};
    }
  }
  if (!is_valid(x, e) || render_judgement(x, e) != j)
    throw std::invalid_argument("judgement is not in the image: " + to_string(j));
  return e;
}

namespace {

Payload payload_from_json(const Structure& y, const Json& j) {
  if (j.is_object() && j.contains("proj") && j.at("proj").is_number_integer())
    return Proj{j.at("proj").get<int>()};
  if (j.is_object() && j.contains("term")) {
    auto a = y.parse_term(j.at("term"));
    if (a) return Var{*a};
  }
  throw std::invalid_argument("bad term payload " + j.dump());
}

}  // namespace

Json to_json(const Structure& y, const SPElement& e) {
  Json labels = Json::array();
  for (TypeId t : e.labels) labels.push_back(y.type_json(t));
  Json gaps = Json::object();
  for (const auto& [i, p] : e.gaps) gaps[std::to_string(i)] = payload_json(y, p, true);
  return {{"inc", to_json(e.inc)},
          {"heap", to_json(e.heap)},
          {"labels", labels},
          {"gaps", gaps},
          {"term", e.term ? payload_json(y, *e.term, true) : Json(nullptr)}};
}

Json to_json(const Structure& y, const PSElement& e) {
  Json nodes = Json::array();
  for (const auto& s : e.nodes) nodes.push_back(to_json(y, s));
  return {{"heap", to_json(e.heap)},
          {"nodes", nodes},
          {"term", e.term ? payload_json(y, *e.term, true) : Json(nullptr)}};
}

SPElement sp_from_json(const Structure& y, const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("element must be a JSON object");
  for (const char* key : {"inc", "heap", "labels"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing \"") + key + "\"");
  SPElement e;
  e.inc = inclist_from_json(j.at("inc"));
  e.heap = heap_from_json(j.at("heap"));
  if (!j.at("labels").is_array()) throw std::invalid_argument("labels must be an array");
  for (const auto& l : j.at("labels")) {
    auto t = y.parse_type(l);
    if (!t) throw std::invalid_argument("unknown label " + l.dump());
    e.labels.push_back(*t);
  }
  std::map<int, Payload> gaps;
  if (j.contains("gaps")) {
    if (!j.at("gaps").is_object()) throw std::invalid_argument("gaps must be an object");
    for (const auto& [key, val] : j.at("gaps").items())
      gaps.emplace(std::stoi(key), payload_from_json(y, val));
  }
  e.gaps.assign(gaps.begin(), gaps.end());
  if (j.contains("term") && !j.at("term").is_null()) e.term = payload_from_json(y, j.at("term"));
  if (!is_valid(y, e)) throw std::invalid_argument("not a valid element: " + j.dump());
  return e;
}

PSElement ps_from_json(const Structure& y, const Json& j) {
  if (!j.is_object() || !j.contains("heap") || !j.contains("nodes"))
    throw std::invalid_argument("element needs \"heap\" and \"nodes\"");
  PSElement e;
  e.heap = heap_from_json(j.at("heap"));
  for (const auto& nj : j.at("nodes")) {
    auto s = stype_from_json(y, nj);
    if (!s) throw std::invalid_argument("bad node " + nj.dump());
    e.nodes.push_back(*s);
  }
  if (j.contains("term") && !j.at("term").is_null()) e.term = payload_from_json(y, j.at("term"));
  if (!is_valid(y, e)) throw std::invalid_argument("not a valid element: " + j.dump());
  return e;
}

}  // namespace gatmonad
