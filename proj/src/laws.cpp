#include "gatmonad/laws.hpp"

#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gatmonad {

MonadKind parse_monad(const std::string& name) {
  if (name == "w" || name == "W") return MonadKind::W;
  if (name == "p" || name == "P") return MonadKind::P;
  if (name == "s" || name == "S") return MonadKind::S;
  if (name == "t" || name == "T") return MonadKind::T;
  throw std::invalid_argument("unknown monad '" + name + "'");
}

std::string to_string(MonadKind k) {
  switch (k) {
    case MonadKind::W: return "W";
    case MonadKind::P: return "P";
    case MonadKind::S: return "S";
    case MonadKind::T: return "T";
  }
  return "?";
}

std::string CheckReport::text() const {
  std::ostringstream o;
  o << suite;
  if (!subject.empty()) o << " [" << subject << "]";
  o << " " << bounds.dump() << ": " << (passed ? "pass" : "FAIL") << " (" << checked
    << " checks)\n";
  if (!passed) {
    o << "  failure: " << failure << "\n";
    if (!witness.is_null()) o << "  witness: " << witness.dump() << "\n";
  }
  return o.str();
}

Json CheckReport::to_json() const {
  return {{"suite", suite},   {"subject", subject}, {"bounds", bounds},
          {"passed", passed}, {"checked", checked}, {"failure", failure},
          {"witness", witness}};
}

int default_internal(MonadKind k, const Structure& x, int n) {
  switch (k) {
    case MonadKind::W:
    case MonadKind::P: return n;
    case MonadKind::S:
    case MonadKind::T: return std::max(n, x.max_degree());
  }
  return n;
}

namespace {

struct Ops {
  std::function<ImagePtr(StructurePtr, int)> apply;
  std::function<Map(const Image&)> unit;
  std::function<Map(const Image&, const Image&, Mutation)> mult;
  std::function<Map(const Map&, const Image&, const Image&)> fmap;
};

template <class I>
const I& as(const Image& img) {
  return static_cast<const I&>(img);
}

template <class I>
Ops make_ops(std::function<ImagePtr(StructurePtr, int)> apply) {
  Ops o;
  o.apply = std::move(apply);
  o.unit = [](const Image& i) { return unit_map(as<I>(i)); };
  o.mult = [](const Image& a, const Image& b, Mutation m) {
    return mult_map(as<I>(a), as<I>(b), m);
  };
  o.fmap = [](const Map& f, const Image& a, const Image& b) {
    return fmap(f, as<I>(a), as<I>(b));
  };
  return o;
}

Ops ops(MonadKind k) {
  switch (k) {
    case MonadKind::W: return make_ops<WeakeningImage>([](StructurePtr x, int b) -> ImagePtr { return apply_W(x, b); });
    case MonadKind::P: return make_ops<WeakeningImage>([](StructurePtr x, int b) -> ImagePtr { return apply_P(x, b); });
    case MonadKind::S: return make_ops<SubstitutionImage>([](StructurePtr x, int b) -> ImagePtr { return apply_S(x, b); });
    case MonadKind::T: return make_ops<CompositeImage>([](StructurePtr x, int b) -> ImagePtr { return apply_T(x, b); });
  }
  throw std::logic_error("unknown monad");
}

Json type_or_null(const Structure& s, TypeId t) {
  return t == kNone ? Json(nullptr) : s.type_json(t);
}
Json term_or_null(const Structure& s, TermId a) {
  return a == kNone ? Json(nullptr) : s.term_json(a);
}

// Compares two maps out of the same source on elements of degree <= n.
bool same_on(CheckReport& r, const std::string& law, const Map& lhs, const Map& rhs,
             int n) {
  const Structure& s = *lhs.source();
  for (TypeId t = 0; t < static_cast<TypeId>(s.type_count()); ++t) {
    if (s.degree(t) > n) continue;
    ++r.checked;
    if (lhs.type(t) == kNone || lhs.type(t) != rhs.type(t)) {
      r.passed = false;
      r.failure = law + " fails at a type-element of degree " + std::to_string(s.degree(t));
      r.witness = {{"law", law},
                   {"element", s.type_json(t)},
                   {"lhs", type_or_null(*lhs.target(), lhs.type(t))},
                   {"rhs", type_or_null(*rhs.target(), rhs.type(t))}};
      return false;
    }
  }
  for (TermId a = 0; a < static_cast<TermId>(s.term_count()); ++a) {
    if (s.degree(s.term_type(a)) > n) continue;
    ++r.checked;
    if (lhs.term(a) == kNone || lhs.term(a) != rhs.term(a)) {
      r.passed = false;
      r.failure = law + " fails at a term-element of degree " +
                  std::to_string(s.degree(s.term_type(a)));
      r.witness = {{"law", law},
                   {"element", s.term_json(a)},
                   {"lhs", term_or_null(*lhs.target(), lhs.term(a))},
                   {"rhs", term_or_null(*rhs.target(), rhs.term(a))}};
      return false;
    }
  }
  return true;
}

Json square_witness(const SquareCheck& c, const Structure& x, const Structure& y) {
  Json w = {{"degree", c.degree}, {"at_term", c.at_term}, {"preimages", c.preimages}};
  if (c.status == SquareCheck::Status::not_pullback) {
    w["x"] = c.at_term ? x.term_json(c.x) : x.type_json(c.x);
    w["y"] = c.at_term ? y.term_json(c.y) : y.type_json(c.y);
  }
  return w;
}

}  // namespace

namespace {

std::vector<SType> boundaries(const Structure& x, const SType& s) {
  std::vector<SType> out{s};
  while (out.front().inc.length() > 1) out.insert(out.begin(), boundary(x, out.front()));
  return out;
}

bool same_element(CheckReport& r, const std::string& law, const Structure& x,
                  const std::function<Json()>& element,
                  const std::function<PSElement()>& lhs,
                  const std::function<PSElement()>& rhs) {
  ++r.checked;
  std::optional<PSElement> l, h;
  try {
    l = lhs();
  } catch (const std::invalid_argument&) {
  }
  try {
    h = rhs();
  } catch (const std::invalid_argument&) {
  }
  if (l && h && *l == *h) return true;
  r.passed = false;
  r.failure = law + " fails";
  r.witness = {{"law", law},
               {"element", element()},
               {"lhs", l ? to_json(x, *l) : Json(nullptr)},
               {"rhs", h ? to_json(x, *h) : Json(nullptr)}};
  return false;
}

// T on values. The unit laws are checked on every element of TX. For
// associativity only elements of T(T(TX)) over a linear outer heap are
// visited, i.e. η^P of each element of S(T(TX)): every side of the law acts
// on an element node by node along its ancestor chains, so the result on an
// arbitrary outer heap is assembled from the results on those chains, and an
// outer projection term is carried through unchanged by both sides.
CheckReport laws_T(StructurePtr x, int n, int internal, Mutation m, CheckReport r) {
  const Structure& X = *x;
  auto f1 = apply_T(x, internal);
  const Structure& s1 = *f1->structure();
  const Map eta = unit_map(*f1);
  auto map_node = [](const SType& e, const Map& f) {
    SType out{e.inc, f.type(e.head), {}};
    if (out.head == kNone) throw std::invalid_argument("node head outside the image");
    for (const auto& [i, g] : e.gaps) {
      out.gaps.push_back({i, f.term(g)});
      if (out.gaps.back().second == kNone)
        throw std::invalid_argument("gap term outside the image");
    }
    return out;
  };
  auto map_value = [&](const PSElement& e, const Map& f) {
    PSElement out{e.heap, {}, e.term};
    for (const auto& node : e.nodes) out.nodes.push_back(map_node(node, f));
    if (out.term)
      if (const auto* v = std::get_if<Var>(&*out.term)) {
        out.term = Var{f.term(v->term)};
        if (f.term(v->term) == kNone) throw std::invalid_argument("term outside the image");
      }
    return out;
  };
  auto unit_laws = [&](const PSElement& e, const std::function<Json()>& el) {
    PSElement lifted = e.term ? unit_T_term(s1, *f1->find_term(e)) : unit_T(s1, *f1->find(e));
    if (!same_element(r, "left unit μ∘ηT = id", X, el,
                      [&] { return mult_T(*f1, lifted, m); }, [&] { return e; }))
      return false;
    return same_element(r, "right unit μ∘Tη = id", X, el,
                        [&] { return mult_T(*f1, map_value(e, eta), m); }, [&] { return e; });
  };
  for (TypeId t = 0; t < static_cast<TypeId>(s1.type_count()); ++t) {
    if (s1.degree(t) > n) continue;
    if (!unit_laws(f1->type(t), [&] { return s1.type_json(t); })) return r;
    for (TermId a : s1.terms_over(t))
      if (!unit_laws(f1->term(a), [&] { return s1.term_json(a); })) return r;
  }

  auto f2 = apply_T(f1->structure(), internal);
  const Structure& s2 = *f2->structure();
  const Map mu = mult_map(*f2, *f1, m);
  for (int d = 1; d <= n; ++d) {
    bool ok = true;
    for_each_stype(s2, d, internal, [&](const SType& l) {
      if (!ok) return;
      PSElement z{Heap::linear(d), boundaries(s2, l), std::nullopt};
      std::vector<std::optional<TermId>> terms{std::nullopt};
      for (TermId a : s2.terms_over(l.head)) terms.push_back(a);
      for (const auto& a : terms) {
        if (a) z.term = Var{*a};
        auto el = [&] {
          // Heads and gap terms are ids into T(TX); their full JSON nests
          // two images deep.
          Json j = {{"heap", z.heap.parents()}, {"nodes", Json::array()}};
          for (const auto& node : z.nodes) {
            Json g = Json::object();
            for (const auto& [i, t] : node.gaps) g[std::to_string(i)] = t;
            j["nodes"].push_back({{"inc", node.inc.values()}, {"head", node.head}, {"gaps", g}});
          }
          j["term"] = a ? Json(*a) : Json(nullptr);
          return j;
        };
        ok = same_element(
            r, "associativity μ∘μT = μ∘Tμ", X, el,
            [&] { return mult_T(*f1, mult_T(*f2, z, m), m); },
            [&] { return mult_T(*f1, map_value(z, mu), m); });
        if (!ok) return;
      }
    });
    if (!ok) return r;
  }
  return r;
}

}  // namespace

CheckReport check_monad_laws(MonadKind k, StructurePtr x, int n, int internal,
                             Mutation m, bool full) {
  CheckReport r;
  r.suite = "monad-laws";
  r.subject = to_string(k);
  r.bounds = {{"N", n}, {"internal", internal}};
  if (k == MonadKind::T && !full) {
    r.bounds["outer"] = "linear";
    return laws_T(std::move(x), n, internal, m, std::move(r));
  }
  const Ops F = ops(k);
  auto f1 = F.apply(x, internal);
  auto f2 = F.apply(f1->structure(), internal);
  auto f3 = F.apply(f2->structure(), n);
  const Map mu = F.mult(*f2, *f1, m);
  const Map id = Map::identity(f1->structure());
  if (!same_on(r, "left unit μ∘ηF = id", compose(mu, F.unit(*f2)), id, n)) return r;
  if (!same_on(r, "right unit μ∘Fη = id", compose(mu, F.fmap(F.unit(*f1), *f1, *f2)), id, n))
    return r;
  const Map mu2 = F.mult(*f3, *f2, m);
  same_on(r, "associativity μ∘μF = μ∘Fμ", compose(mu, mu2),
          compose(mu, F.fmap(mu, *f3, *f2)), n);
  return r;
}

CheckReport check_cartesian(MonadKind k, bool multiplication, StructurePtr x, int n,
                            int internal, Mutation m) {
  CheckReport r;
  r.suite = "cartesian";
  r.subject = (multiplication ? "μ^" : "η^") + to_string(k);
  const int top = std::max(n, x->max_degree());
  r.bounds = {{"N", n}, {"internal", internal}, {"terminal", top}};
  const Ops F = ops(k);
  auto one = terminal(top);
  const Map b = bang(x, one);
  auto fx = F.apply(x, internal);
  auto f1 = F.apply(one, internal);
  const Map fb = F.fmap(b, *fx, *f1);
  SquareCheck c;
  StructurePtr ys;
  if (!multiplication) {
    c = check_pullback(F.unit(*fx), b, fb, F.unit(*f1), n);
    ys = one;
  } else {
    auto ffx = F.apply(fx->structure(), n);
    auto ff1 = F.apply(f1->structure(), n);
    c = check_pullback(F.mult(*ffx, *fx, m), F.fmap(fb, *ffx, *ff1), fb,
                       F.mult(*ff1, *f1, m), n);
    ys = ff1->structure();
  }
  r.checked = 1;
  if (!c.ok()) {
    r.passed = false;
    r.failure = c.witness;
    r.witness = square_witness(c, *fx->structure(), *ys);
  }
  return r;
}

namespace {

bool same_value(CheckReport& r, const std::string& axiom, const Structure& x,
                const Json& element, const PSElement& lhs, const PSElement& rhs) {
  ++r.checked;
  if (lhs == rhs) return true;
  r.passed = false;
  r.failure = axiom + " fails";
  r.witness = {{"axiom", axiom},
               {"element", element},
               {"lhs", to_json(x, lhs)},
               {"rhs", to_json(x, rhs)}};
  return false;
}

// P(μ^S) on a value over SX whose nodes are S(SX) values.
PSElement flatten_nodes(const SubstitutionImage& sx, const PSElement& e, Mutation m) {
  PSElement out{e.heap, {}, e.term};
  for (const auto& node : e.nodes) out.nodes.push_back(mult_S(sx, node, m));
  if (out.term)
    if (const auto* v = std::get_if<Var>(&*out.term)) out.term = Var{sx.term(v->term).term};
  return out;
}

}  // namespace

CheckReport check_beck(StructurePtr x, int n, int internal, Mutation m) {
  CheckReport r;
  r.suite = "beck";
  r.bounds = {{"N", n}, {"internal", internal}};
  const Structure& X = *x;
  auto px = apply_P(x, internal);
  auto tx = apply_T(x, internal);
  const SubstitutionImage& sx = tx->s();
  const WeakeningImage& psx = tx->p();

  // δ ∘ η^S_P = P η^S
  {
    const Structure& s = *px->structure();
    auto check = [&](TypeId t, std::optional<TermId> a) {
      const WType& w = px->type(t);
      SPElement e{IncList::identity(w.heap.size()), w.heap, w.labels, {}, std::nullopt};
      PSElement want{w.heap, {}, std::nullopt};
      for (TypeId l : w.labels) want.nodes.push_back(unit_S(X, l));
      if (a) e.term = want.term = px->term(*a).payload;
      const Json el = a ? s.term_json(*a) : s.type_json(t);
      PSElement got;
      try {
        got = delta(e, m);
      } catch (const std::invalid_argument&) {
      }
      return same_value(r, "δ∘η^S = Pη^S", X, el, got, want);
    };
    for (TypeId t = 0; t < static_cast<TypeId>(s.type_count()); ++t) {
      if (s.degree(t) > n) continue;
      if (!check(t, std::nullopt)) return r;
      for (TermId a : s.terms_over(t))
        if (!check(t, a)) return r;
    }
  }
  // δ ∘ S η^P = η^P_S
  {
    const Structure& s = *sx.structure();
    for (TypeId t = 0; t < static_cast<TypeId>(s.type_count()); ++t) {
      if (s.degree(t) > n) continue;
      const SType& st = sx.type(t);
      const WType w = unit_W(X, st.head);
      SPElement e{st.inc, w.heap, w.labels, {}, std::nullopt};
      for (const auto& [i, a] : st.gaps) e.gaps.push_back({i, Var{a}});
      PSElement want{Heap::linear(st.inc.length()), boundaries(X, st), std::nullopt};
      std::vector<std::optional<TermId>> terms{std::nullopt};
      for (TermId a : s.terms_over(t)) terms.push_back(sx.term(a).term);
      for (const auto& a : terms) {
        if (a) e.term = want.term = Var{*a};
        PSElement got;
        try {
          got = delta(e, m);
        } catch (const std::invalid_argument&) {
        }
        if (!same_value(r, "δ∘Sη^P = η^P_S", X, s.type_json(t), got, want)) return r;
      }
    }
  }
  // The outer S layer of the last two axioms is streamed rather than built.
  auto each_outer = [&](const Structure& base,
                        const std::function<bool(const SType&, std::optional<TermId>)>& check) {
    bool ok = true;
    for (int d = 1; d <= n && ok; ++d)
      for_each_stype(base, d, internal, [&](const SType& e) {
        if (!ok) return;
        ok = check(e, std::nullopt);
        for (TermId a : base.terms_over(e.head)) {
          if (!ok) return;
          ok = check(e, a);
        }
      });
    return ok;
  };
  auto outer_json = [](const Structure& base, const SType& e, std::optional<TermId> top) {
    Json j = to_json(base, e);
    if (top) j["term"] = base.term_json(*top);
    return j;
  };
  // δ ∘ μ^S_P = Pμ^S ∘ δ_S ∘ Sδ
  {
    auto spx = apply_S(px->structure(), internal);
    const Structure& s = *spx->structure();
    auto psx_id = [&](const PSElement& v) {
      auto id = v.term ? tx->find_term(v) : tx->find(v);
      if (!id) throw BoundExceeded("δ value outside the internal bound");
      return *id;
    };
    // `mid` is the SPX term under the element, `top` the PX term under it.
    auto check = [&](const SType& E, std::optional<TermId> mid) {
      std::optional<TermId> top;
      if (mid) top = spx->term(*mid).term;
      PSElement lhs, rhs;
      try {
        lhs = delta(to_sp(*px, mult_S(*spx, E, m), top), m);
        SType sd{E.inc, psx_id(delta(to_sp(*px, spx->type(E.head)), m)), {}};
        for (const auto& [i, g] : E.gaps) {
          const STerm& gt = spx->term(g);
          sd.gaps.push_back({i, psx_id(delta(to_sp(*px, spx->type(gt.type), gt.term), m))});
        }
        std::optional<TermId> st;
        if (top) st = psx_id(delta(to_sp(*px, spx->type(E.head), top), m));
        rhs = flatten_nodes(sx, delta(to_sp(psx, sd, st), m), m);
      } catch (const std::invalid_argument&) {
      }
      if (lhs == rhs) {
        ++r.checked;
        return true;
      }
      return same_value(r, "δ∘μ^S_P = Pμ^S∘δ_S∘Sδ", X, outer_json(s, E, mid), lhs, rhs);
    };
    if (!each_outer(s, check)) return r;
  }
  // δ ∘ Sμ^P = μ^P_S ∘ Pδ ∘ δ_P
  {
    auto ppx = apply_P(px->structure(), internal);
    const Structure& s = *ppx->structure();
    auto px_type = [&](TypeId h) {
      auto id = px->find(mult_W(*px, ppx->type(h), m));
      if (!id) throw BoundExceeded("μ^P value outside the internal bound");
      return *id;
    };
    auto px_term = [&](TermId g) {
      const WTerm& w = ppx->term(g);
      auto id = px->find_term(px_type(w.type), mult_payload(*px, ppx->type(w.type), w.payload, m));
      if (!id) throw BoundExceeded("μ^P value outside the internal bound");
      return *id;
    };
    auto check = [&](const SType& E, std::optional<TermId> top) {
      PSElement lhs, rhs;
      try {
        SType l{E.inc, px_type(E.head), {}};
        for (const auto& [i, g] : E.gaps) l.gaps.push_back({i, px_term(g)});
        std::optional<TermId> lt;
        if (top) lt = px_term(*top);
        lhs = delta(to_sp(*px, l, lt), m);

        const PSElement d = delta(to_sp(*ppx, E, top), m);
        std::vector<PSElement> family;
        const int k = d.heap.size();
        for (int i = 1; i <= k; ++i) {
          std::optional<TermId> nt;
          if (i == k && d.term)
            if (const auto* v = std::get_if<Var>(&*d.term)) nt = v->term;
          family.push_back(delta(to_sp(*px, d.nodes[i - 1], nt), m));
        }
        rhs = mult_P_values(d.heap, family, d.term, m);
      } catch (const std::invalid_argument&) {
      }
      if (lhs == rhs) {
        ++r.checked;
        return true;
      }
      return same_value(r, "δ∘Sμ^P = μ^P_S∘Pδ∘δ_P", X, outer_json(s, E, top), lhs, rhs);
    };
    if (!each_outer(s, check)) return r;
  }
  return r;
}

CheckReport check_middle_unit(StructurePtr x, int n, Mutation m) {
  CheckReport r;
  r.suite = "middle-unit";
  r.bounds = {{"N", n}};
  const Structure& X = *x;
  auto tx = apply_T(x, n);
  const Structure& s = *tx->structure();
  auto check = [&](const PSElement& e, const Json& el) {
    PSElement outer{e.heap, {}, std::nullopt};
    PSElement last;
    for (const auto& node : e.nodes) {
      last = PSElement{Heap::linear(node.inc.length()), boundaries(X, node), std::nullopt};
      outer.nodes.push_back(SType{IncList::identity(node.inc.length()), *tx->find(last), {}});
    }
    if (e.term) {
      if (const auto* v = std::get_if<Var>(&*e.term)) {
        last.term = *v;
        outer.term = Var{*tx->find_term(last)};
      } else {
        outer.term = e.term;
      }
    }
    PSElement got;
    try {
      got = mult_T(*tx, outer, m);
    } catch (const std::invalid_argument&) {
    }
    return same_value(r, "μ^T∘P(η^Sη^P)S = id", X, el, got, e);
  };
  for (TypeId t = 0; t < static_cast<TypeId>(s.type_count()); ++t) {
    if (!check(tx->type(t), s.type_json(t))) return r;
    for (TermId a : s.terms_over(t))
      if (!check(tx->term(a), s.term_json(a))) return r;
  }
  return r;
}

CheckReport check_pullback_preservation(MonadKind k, const Map& left, const Map& right,
                                        int n) {
  CheckReport r;
  r.suite = "pullbacks";
  r.subject = to_string(k);
  r.bounds = {{"N", n}};
  const Ops F = ops(k);
  const FibreProduct fp = fibre_product(left, right);
  auto fa = F.apply(fp.apex, n);
  auto fx = F.apply(left.source(), n);
  auto fy = F.apply(right.source(), n);
  auto fz = F.apply(left.target(), n);
  const SquareCheck c =
      check_pullback(F.fmap(fp.left, *fa, *fx), F.fmap(fp.right, *fa, *fy),
                     F.fmap(left, *fx, *fz), F.fmap(right, *fy, *fz), n);
  r.checked = 1;
  if (!c.ok()) {
    r.passed = false;
    r.failure = c.witness;
    r.witness = square_witness(c, *fx->structure(), *fy->structure());
  }
  return r;
}

CheckReport counterexample_T(int internal) {
  auto x = make_structure(StructureDecl{{TypeDecl{"A", 1, std::nullopt}}, {}});
  CheckReport r = check_cartesian(MonadKind::T, true, x, 1, internal);
  r.suite = "counterexample";
  r.subject = "μ^T on {A:1}";
  if (r.passed) {
    r.passed = false;
    r.failure = "the μ^T square unexpectedly is a pullback at degree 1";
    return r;
  }
  // Expected witness: an element of TT1 whose single node substitutes into
  // the degree-2 element over the heap 0,0.
  const Json& y = r.witness.value("y", Json(nullptr));
  bool match = false;
  if (r.witness.value("preimages", -1) == 0 && y.is_object() && y.contains("nodes")) {
    const Json& node = y.at("nodes").at(0);
    match = node.at("inc") == Json::array({2}) &&
            node.at("head").at("heap") == Json::array({0, 0}) &&
            node.at("gaps").size() == 1;
  }
  r.passed = match;
  r.failure = match ? "no element of TTX lies over (x, y): the gap term at slot 1 would "
                      "have to be a term of TX over A, and TX has none (a failure of "
                      "linearity)"
                    : "the square fails, but not at the expected witness: " + r.failure;
  return r;
}

namespace {

std::set<std::string> render_image(const StructurePtr& x, const RuleSet& rules, int n) {
  std::set<std::string> out;
  auto add = [&](const Judgement& j) {
    if (j.degree() <= n) out.insert(to_string(j));
  };
  const bool w = rules.weakening, p = rules.projection, s = rules.substitution;
  if (!w && !p && !s) {
    for (const auto& j : basic_judgements(*x)) add(j);
  } else if (!s) {
    auto img = WeakeningImage::build(x, n, p);
    const Structure& st = *img->structure();
    for (TypeId t = 0; t < static_cast<TypeId>(st.type_count()); ++t) {
      add(render_judgement(*x, img->type(t)));
      for (TermId a : st.terms_over(t))
        add(render_term_judgement(*x, img->type(t), img->term(a).payload));
    }
  } else if (!w) {
    auto img = apply_S(x, n);
    const Structure& st = *img->structure();
    for (TypeId t = 0; t < static_cast<TypeId>(st.type_count()); ++t) {
      add(render_judgement(*x, img->type(t)));
      for (TermId a : st.terms_over(t))
        add(render_term_judgement(*x, img->type(t), img->term(a).term));
    }
  } else {
    auto img = apply_T(x, n);
    const Structure& st = *img->structure();
    for (TypeId t = 0; t < static_cast<TypeId>(st.type_count()); ++t) {
      add(render_judgement(*x, img->type(t)));
      for (TermId a : st.terms_over(t)) {
        const PSElement e = img->term(a);
        if (!p && std::holds_alternative<Proj>(*e.term)) continue;
        add(render_judgement(*x, e));
      }
    }
  }
  return out;
}

}  // namespace

CheckReport check_oracle(StructurePtr x, const RuleSet& rules, int n) {
  return check_oracle(std::move(x), rules, n, rules);
}

CheckReport check_oracle(StructurePtr x, const RuleSet& rules, int n,
                         const RuleSet& image_rules) {
  CheckReport r;
  r.suite = "oracle";
  r.subject = rules.name();
  if (image_rules.name() != rules.name()) r.subject += " vs image " + image_rules.name();
  const SaturationBounds b = default_bounds(*x, rules, n);
  r.bounds = {{"N", n}, {"internal", b.internal_degree}, {"expr_depth", b.max_expr_depth}};
  std::set<std::string> want;
  for (const auto& j : saturate(*x, rules, b).judgements) want.insert(to_string(j));
  const std::set<std::string> got = render_image(x, image_rules, n);
  r.checked = want.size();
  for (const auto& j : got)
    if (!want.count(j)) {
      r.passed = false;
      r.failure = "image judgement not derived by the oracle";
      r.witness = {{"judgement", j}};
      return r;
    }
  for (const auto& j : want)
    if (!got.count(j)) {
      r.passed = false;
      r.failure = "derived judgement missing from the image";
      r.witness = {{"judgement", j}};
      return r;
    }
  return r;
}

}  // namespace gatmonad
