#include "gatmonad/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <unordered_map>

namespace gatmonad {

// ---------------------------------------------------------------------------
// Expressions

Expression Expression::variable(std::string name) {
  Expression e;
  e.is_var_ = true;
  e.name_ = std::move(name);
  return e;
}

Expression Expression::apply(std::string symbol, std::vector<Expression> args) {
  Expression e;
  e.name_ = std::move(symbol);
  e.args_ = std::move(args);
  return e;
}

Expression Expression::canonical_variable(int index) {
  return variable("x" + std::to_string(index));
}

int Expression::depth() const {
  int d = 0;
  for (const auto& a : args_) d = std::max(d, a.depth());
  return d + 1;
}

bool operator==(const Expression& a, const Expression& b) {
  return a.is_var_ == b.is_var_ && a.name_ == b.name_ && a.args_ == b.args_;
}

std::strong_ordering operator<=>(const Expression& a, const Expression& b) {
  if (auto c = a.is_var_ <=> b.is_var_; c != 0) return c;
  if (auto c = a.name_ <=> b.name_; c != 0) return c;
  const std::size_t n = std::min(a.args_.size(), b.args_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
  return a.args_.size() <=> b.args_.size();
}

namespace {

void collect_vars(const Expression& e, std::set<std::string>& out) {
  if (e.is_variable()) {
    out.insert(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_vars(a, out);
}

}  // namespace

std::set<std::string> free_vars(const Expression& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

Expression substitute(const Expression& e, const Expression& t,
                      const std::string& x) {
  if (e.is_variable()) return e.name() == x ? t : e;
  std::vector<Expression> args;
  args.reserve(e.args().size());
  for (const auto& a : e.args()) args.push_back(substitute(a, t, x));
  return Expression::apply(e.name(), std::move(args));
}

std::string to_string(const Expression& e) {
  if (e.is_variable() || e.args().empty()) return e.name();
  std::string s = e.name() + "(";
  for (std::size_t i = 0; i < e.args().size(); ++i) {
    if (i) s += ", ";
    s += to_string(e.args()[i]);
  }
  return s + ")";
}

int canonical_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x' || name[1] == '0') return 0;
  int k = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return 0;
    k = k * 10 + (name[i] - '0');
  }
  return k;
}

// ---------------------------------------------------------------------------
// Judgements

Judgement Judgement::type_judgement(std::vector<ContextEntry> ctx, Expression t) {
  Judgement j;
  j.context = std::move(ctx);
  j.form = Form::type;
  j.subject = std::move(t);
  return j;
}

Judgement Judgement::term_judgement(std::vector<ContextEntry> ctx, Expression t,
                                    Expression ty) {
  Judgement j;
  j.context = std::move(ctx);
  j.form = Form::term;
  j.subject = std::move(t);
  j.type = std::move(ty);
  return j;
}

Judgement Judgement::type_equality(std::vector<ContextEntry> ctx, Expression a,
                                   Expression b) {
  Judgement j;
  j.context = std::move(ctx);
  j.form = Form::type_eq;
  j.subject = std::move(a);
  j.other = std::move(b);
  return j;
}

Judgement Judgement::term_equality(std::vector<ContextEntry> ctx, Expression a,
                                   Expression b, Expression ty) {
  Judgement j;
  j.context = std::move(ctx);
  j.form = Form::term_eq;
  j.subject = std::move(a);
  j.other = std::move(b);
  j.type = std::move(ty);
  return j;
}

std::vector<Judgement> boundary(const Judgement& j) {
  switch (j.form) {
    case Form::type: {
      if (j.context.empty()) return {};
      std::vector<ContextEntry> ctx(j.context.begin(), j.context.end() - 1);
      return {Judgement::type_judgement(std::move(ctx), j.context.back().type)};
    }
    case Form::term:
      return {Judgement::type_judgement(j.context, j.type)};
    case Form::type_eq:
      return {Judgement::type_judgement(j.context, j.subject),
              Judgement::type_judgement(j.context, j.other)};
    case Form::term_eq:
      return {Judgement::term_judgement(j.context, j.subject, j.type),
              Judgement::term_judgement(j.context, j.other, j.type)};
  }
  return {};
}

namespace {

Expression rename(const Expression& e,
                  const std::map<std::string, std::string>& scope) {
  if (e.is_variable()) {
    auto it = scope.find(e.name());
    if (it == scope.end())
      throw std::invalid_argument("free variable " + e.name() +
                                  " not bound by the context");
    return Expression::variable(it->second);
  }
  std::vector<Expression> args;
  for (const auto& a : e.args()) args.push_back(rename(a, scope));
  return Expression::apply(e.name(), std::move(args));
}

}  // namespace

Judgement alpha_canonical(const Judgement& j) {
  std::map<std::string, std::string> scope;
  Judgement out;
  out.form = j.form;
  for (std::size_t i = 0; i < j.context.size(); ++i) {
    const auto& entry = j.context[i];
    if (scope.count(entry.var))
      throw std::invalid_argument("variable " + entry.var +
                                  " declared twice in the context");
    Expression ty = rename(entry.type, scope);
    std::string fresh = "x" + std::to_string(i + 1);
    scope[entry.var] = fresh;
    out.context.push_back({fresh, std::move(ty)});
  }
  out.subject = rename(j.subject, scope);
  if (j.form == Form::type_eq || j.form == Form::term_eq)
    out.other = rename(j.other, scope);
  if (j.form == Form::term || j.form == Form::term_eq)
    out.type = rename(j.type, scope);
  return out;
}

std::string to_string(const Judgement& j) {
  std::string s;
  for (std::size_t i = 0; i < j.context.size(); ++i) {
    if (i) s += ", ";
    s += j.context[i].var + " : " + to_string(j.context[i].type);
  }
  s += s.empty() ? "|- " : " |- ";
  switch (j.form) {
    case Form::type:
      return s + to_string(j.subject) + " type";
    case Form::term:
      return s + to_string(j.subject) + " : " + to_string(j.type);
    case Form::type_eq:
      return s + to_string(j.subject) + " = " + to_string(j.other) + " type";
    case Form::term_eq:
      return s + to_string(j.subject) + " = " + to_string(j.other) + " : " +
             to_string(j.type);
  }
  return s;
}

namespace {

class JudgementParser {
 public:
  explicit JudgementParser(const std::string& text) { tokenize(text); }

  Judgement parse() {
    Judgement j;
    if (!at("|-")) {
      while (true) {
        std::string var = ident();
        expect(":");
        Expression ty = expr();
        j.context.push_back({var, std::move(ty)});
        bound_.insert(var);
        if (at(",")) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect("|-");
    Expression first = expr();
    if (at("type") && pos_ + 1 == toks_.size()) {
      ++pos_;
      j.form = Form::type;
      j.subject = std::move(first);
    } else if (at(":")) {
      ++pos_;
      j.form = Form::term;
      j.subject = std::move(first);
      j.type = expr();
    } else if (at("=")) {
      ++pos_;
      Expression second = expr();
      if (at("type") && pos_ + 1 == toks_.size()) {
        ++pos_;
        j.form = Form::type_eq;
        j.subject = std::move(first);
        j.other = std::move(second);
      } else {
        expect(":");
        j.form = Form::term_eq;
        j.subject = std::move(first);
        j.other = std::move(second);
        j.type = expr();
      }
    } else {
      fail("expected 'type', ':' or '='");
    }
    if (pos_ != toks_.size()) fail("trailing input");
    return j;
  }

 private:
  void tokenize(const std::string& s) {
    std::size_t i = 0;
    while (i < s.size()) {
      const unsigned char c = s[i];
      if (std::isspace(c)) {
        ++i;
      } else if (std::isalpha(c) || c == '_') {
        std::size_t k = i + 1;
        while (k < s.size() && (std::isalnum(static_cast<unsigned char>(s[k])) ||
                                s[k] == '_' || s[k] == '\''))
          ++k;
        toks_.push_back(s.substr(i, k - i));
        i = k;
      } else if (s.compare(i, 2, "|-") == 0) {
        toks_.push_back("|-");
        i += 2;
      } else if (s.compare(i, 3, "\xE2\x8A\xA2") == 0) {  // ⊢
        toks_.push_back("|-");
        i += 3;
      } else if (c == '(' || c == ')' || c == ',' || c == ':' || c == '=') {
        toks_.push_back(std::string(1, static_cast<char>(c)));
        ++i;
      } else {
        throw std::invalid_argument("unexpected character '" +
                                    std::string(1, static_cast<char>(c)) +
                                    "' in judgement");
      }
    }
  }

  bool at(const char* t) const { return pos_ < toks_.size() && toks_[pos_] == t; }

  void expect(const char* t) {
    if (!at(t)) fail(std::string("expected '") + t + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string near = pos_ < toks_.size() ? toks_[pos_] : "end of input";
    throw std::invalid_argument("judgement parse error: " + msg + " near '" +
                                near + "'");
  }

  std::string ident() {
    if (pos_ >= toks_.size()) fail("expected a name");
    const std::string& t = toks_[pos_];
    if (!(std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_'))
      fail("expected a name");
    ++pos_;
    return t;
  }

  Expression expr() {
    std::string name = ident();
    if (at("(")) {
      ++pos_;
      std::vector<Expression> args;
      if (!at(")")) {
        args.push_back(expr());
        while (at(",")) {
          ++pos_;
          args.push_back(expr());
        }
      }
      expect(")");
      return Expression::apply(std::move(name), std::move(args));
    }
    if (bound_.count(name) || canonical_index(name) > 0)
      return Expression::variable(std::move(name));
    return Expression::apply(std::move(name));
  }

  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> bound_;
};

}  // namespace

Judgement parse_judgement(const std::string& text) {
  return JudgementParser(text).parse();
}

// ---------------------------------------------------------------------------
// Rule sets

RuleSet RuleSet::parse(const std::string& name) {
  RuleSet r;
  if (name == "none") return r;
  for (char c : name) {
    switch (c) {
      case 'w': r.weakening = true; break;
      case 'p': r.projection = true; break;
      case 's': r.substitution = true; break;
      default: throw std::invalid_argument("unknown rule set '" + name + "'");
    }
  }
  if (name.empty()) throw std::invalid_argument("empty rule set name");
  return r;
}

std::string RuleSet::name() const {
  std::string s;
  if (weakening) s += 'w';
  if (projection) s += 'p';
  if (substitution) s += 's';
  return s.empty() ? "none" : s;
}

// ---------------------------------------------------------------------------
// Hash-consed judgements over canonical variables. Variable x_k is stored as
// symbol -k; a context is a node of a trie of types.

namespace {

using ExprId = int;
using CtxId = int;
using JudgId = int;

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v)
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

struct J {
  CtxId ctx = 0;
  Form form = Form::type;
  ExprId a = -1;  // subject
  ExprId b = -1;  // other side of an equality
  ExprId c = -1;  // type of a term (equality)
};

class Engine {
 public:
  Engine() { ctxs_.push_back({-1, -1, 0}); }

  int symbol(const std::string& name) {
    auto [it, inserted] = sym_index_.emplace(name, static_cast<int>(syms_.size()));
    if (inserted) syms_.push_back(name);
    return it->second;
  }

  ExprId var(int k) { return make(-k, {}); }

  ExprId make(int sym, std::vector<ExprId> args) {
    std::vector<int> key;
    key.reserve(args.size() + 1);
    key.push_back(sym);
    key.insert(key.end(), args.begin(), args.end());
    auto it = expr_index_.find(key);
    if (it != expr_index_.end()) return it->second;
    Node n{sym, std::move(args), 1, sym < 0 ? -sym : 0};
    for (ExprId a : n.args) {
      n.depth = std::max(n.depth, nodes_[a].depth + 1);
      n.maxvar = std::max(n.maxvar, nodes_[a].maxvar);
    }
    const auto id = static_cast<ExprId>(nodes_.size());
    nodes_.push_back(std::move(n));
    expr_index_.emplace(std::move(key), id);
    return id;
  }

  int depth(ExprId e) const { return nodes_[e].depth; }

  CtxId extend(CtxId parent, ExprId type) {
    const auto key = pair_key(parent, type);
    auto it = ctx_index_.find(key);
    if (it != ctx_index_.end()) return it->second;
    const auto id = static_cast<CtxId>(ctxs_.size());
    ctxs_.push_back({parent, type, ctxs_[parent].len + 1});
    ctx_index_.emplace(key, id);
    return id;
  }

  std::optional<CtxId> child(CtxId parent, ExprId type) const {
    auto it = ctx_index_.find(pair_key(parent, type));
    if (it == ctx_index_.end()) return std::nullopt;
    return it->second;
  }

  int length(CtxId c) const { return ctxs_[c].len; }
  std::size_t context_count() const { return ctxs_.size(); }

  CtxId prefix(CtxId c, int p) const {
    while (ctxs_[c].len > p) c = ctxs_[c].parent;
    return c;
  }

  // Type of entry k (1-based).
  ExprId entry(CtxId c, int k) const {
    while (ctxs_[c].len > k) c = ctxs_[c].parent;
    return ctxs_[c].type;
  }

  std::vector<ExprId> entries(CtxId c) const {
    std::vector<ExprId> out(ctxs_[c].len);
    for (; c != 0; c = ctxs_[c].parent) out[ctxs_[c].len - 1] = ctxs_[c].type;
    return out;
  }

  // x_j ↦ x_{j+1} for j > p.
  ExprId shift_up(ExprId e, int p) {
    if (nodes_[e].maxvar <= p) return e;
    const std::vector<int> key{e, p};
    auto it = shift_memo_.find(key);
    if (it != shift_memo_.end()) return it->second;
    ExprId out;
    if (nodes_[e].sym < 0) {
      out = var(-nodes_[e].sym + 1);
    } else {
      std::vector<ExprId> args = nodes_[e].args;
      for (auto& a : args) a = shift_up(a, p);
      out = make(nodes_[e].sym, std::move(args));
    }
    shift_memo_.emplace(key, out);
    return out;
  }

  // x_{p+1} ↦ t and x_j ↦ x_{j-1} for j > p + 1.
  ExprId subst(ExprId e, int p, ExprId t) {
    if (nodes_[e].maxvar <= p) return e;
    const std::vector<int> key{e, p, t};
    auto it = subst_memo_.find(key);
    if (it != subst_memo_.end()) return it->second;
    ExprId out;
    if (nodes_[e].sym < 0) {
      const int k = -nodes_[e].sym;
      out = k == p + 1 ? t : var(k - 1);
    } else {
      std::vector<ExprId> args = nodes_[e].args;
      for (auto& a : args) a = subst(a, p, t);
      out = make(nodes_[e].sym, std::move(args));
    }
    subst_memo_.emplace(key, out);
    return out;
  }

  J weaken(const J& j, int p, ExprId ty) {
    auto es = entries(j.ctx);
    CtxId c = extend(prefix(j.ctx, p), ty);
    for (std::size_t k = p; k < es.size(); ++k) c = extend(c, shift_up(es[k], p));
    return map_body(j, c, [&](ExprId e) { return shift_up(e, p); });
  }

  // Γ, Δ[t/y] with y the entry p + 1; body substituted with `body_term`.
  CtxId subst_context(CtxId ctx, int p, ExprId t) {
    auto es = entries(ctx);
    CtxId c = prefix(ctx, p);
    for (std::size_t k = p + 1; k < es.size(); ++k) c = extend(c, subst(es[k], p, t));
    return c;
  }

  J substitute(const J& j, int p, ExprId t) {
    CtxId c = subst_context(j.ctx, p, t);
    return map_body(j, c, [&](ExprId e) { return subst(e, p, t); });
  }

  J project(CtxId ctx, ExprId ty) {
    J out;
    out.ctx = extend(ctx, ty);
    out.form = Form::term;
    out.a = var(length(ctx) + 1);
    out.c = ty;
    return out;
  }

  // Γ ⊢ t1 = t2 : T and Γ, y : T, Δ ⊢ 𝒥 (type or term judgement).
  J subst_eq(const J& eq, const J& j) {
    const int p = length(eq.ctx);
    J out;
    out.ctx = subst_context(j.ctx, p, eq.b);
    if (j.form == Form::type) {
      out.form = Form::type_eq;
      out.a = subst(j.a, p, eq.a);
      out.b = subst(j.a, p, eq.b);
    } else {
      out.form = Form::term_eq;
      out.a = subst(j.a, p, eq.a);
      out.b = subst(j.a, p, eq.b);
      out.c = subst(j.c, p, eq.b);
    }
    return out;
  }

  int max_depth(const J& j) const {
    int d = 0;
    for (CtxId c = j.ctx; c != 0; c = ctxs_[c].parent)
      d = std::max(d, nodes_[ctxs_[c].type].depth);
    for (ExprId e : {j.a, j.b, j.c})
      if (e >= 0) d = std::max(d, nodes_[e].depth);
    return d;
  }

  std::pair<JudgId, bool> intern(const J& j) {
    std::vector<int> key{j.ctx, static_cast<int>(j.form), j.a, j.b, j.c};
    auto [it, inserted] = judg_index_.emplace(std::move(key),
                                              static_cast<JudgId>(judgs_.size()));
    if (inserted) judgs_.push_back(j);
    return {it->second, inserted};
  }

  const J& judgement(JudgId id) const { return judgs_[id]; }
  std::size_t judgement_count() const { return judgs_.size(); }

  Expression export_expr(ExprId e) const {
    const Node& n = nodes_[e];
    if (n.sym < 0) return Expression::canonical_variable(-n.sym);
    std::vector<Expression> args;
    args.reserve(n.args.size());
    for (ExprId a : n.args) args.push_back(export_expr(a));
    return Expression::apply(syms_[n.sym], std::move(args));
  }

  Judgement export_judgement(const J& j) const {
    Judgement out;
    auto es = entries(j.ctx);
    for (std::size_t k = 0; k < es.size(); ++k)
      out.context.push_back({"x" + std::to_string(k + 1), export_expr(es[k])});
    out.form = j.form;
    out.subject = export_expr(j.a);
    if (j.b >= 0) out.other = export_expr(j.b);
    if (j.c >= 0) out.type = export_expr(j.c);
    return out;
  }

  // Expects canonical variables.
  ExprId import_expr(const Expression& e) {
    if (e.is_variable()) {
      const int k = canonical_index(e.name());
      if (k == 0) throw std::invalid_argument("non-canonical variable " + e.name());
      return var(k);
    }
    std::vector<ExprId> args;
    for (const auto& a : e.args()) args.push_back(import_expr(a));
    return make(symbol(e.name()), std::move(args));
  }

  J import_judgement(const Judgement& j) {
    J out;
    for (const auto& entry : j.context) out.ctx = extend(out.ctx, import_expr(entry.type));
    out.form = j.form;
    out.a = import_expr(j.subject);
    if (j.form == Form::type_eq || j.form == Form::term_eq) out.b = import_expr(j.other);
    if (j.form == Form::term || j.form == Form::term_eq) out.c = import_expr(j.type);
    return out;
  }

 private:
  struct Node {
    int sym;
    std::vector<ExprId> args;
    int depth;
    int maxvar;
  };
  struct Ctx {
    CtxId parent;
    ExprId type;
    int len;
  };

  static std::uint64_t pair_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  template <class F>
  J map_body(const J& j, CtxId c, F&& f) {
    J out = j;
    out.ctx = c;
    out.a = f(j.a);
    if (j.b >= 0) out.b = f(j.b);
    if (j.c >= 0) out.c = f(j.c);
    return out;
  }

  std::vector<std::string> syms_;
  std::unordered_map<std::string, int> sym_index_;
  std::vector<Node> nodes_;
  std::unordered_map<std::vector<int>, ExprId, VecHash> expr_index_;
  std::vector<Ctx> ctxs_;
  std::unordered_map<std::uint64_t, CtxId> ctx_index_;
  std::unordered_map<std::vector<int>, ExprId, VecHash> shift_memo_;
  std::unordered_map<std::vector<int>, ExprId, VecHash> subst_memo_;
  std::vector<J> judgs_;
  std::unordered_map<std::vector<int>, JudgId, VecHash> judg_index_;
};

[[noreturn]] void shape(const std::string& msg) {
  throw RuleError(RuleError::Kind::shape_mismatch, msg);
}

[[noreturn]] void side(const std::string& msg) {
  throw RuleError(RuleError::Kind::side_condition, msg);
}

void need(const std::vector<Judgement>& premises, std::size_t n) {
  if (premises.size() != n)
    shape("rule expects " + std::to_string(n) + " premise(s), got " +
          std::to_string(premises.size()));
}

void need_form(const Judgement& j, Form f, const char* what) {
  if (j.form != f) shape(std::string("premise is not a ") + what + " judgement");
}

}  // namespace

Judgement apply_rule(Rule rule, const std::vector<Judgement>& premises,
                     int position) {
  std::vector<Judgement> canon;
  for (const auto& p : premises) {
    try {
      canon.push_back(alpha_canonical(p));
    } catch (const std::invalid_argument& e) {
      side(e.what());
    }
  }
  Engine eng;
  std::vector<J> js;
  for (const auto& p : canon) js.push_back(eng.import_judgement(p));

  auto same_context = [&](const J& a, const J& b) {
    if (a.ctx != b.ctx) side("premises have different contexts");
  };
  // Γ ⊢ ... as the first premise, Γ, y : T, Δ ⊢ 𝒥 as the second.
  auto split_at = [&](const J& first, const J& second, int p) {
    if (p != eng.length(first.ctx))
      side("position " + std::to_string(p) +
           " differs from the length of the first premise's context");
    if (eng.length(second.ctx) < p) side("position beyond the context");
    if (eng.prefix(second.ctx, p) != first.ctx)
      side("context of the first premise is not a prefix of the second");
  };

  J out;
  switch (rule) {
    case Rule::weaken:
      need(canon, 2);
      need_form(canon[0], Form::type, "type");
      split_at(js[0], js[1], position);
      out = eng.weaken(js[1], position, js[0].a);
      break;
    case Rule::project:
      need(canon, 1);
      need_form(canon[0], Form::type, "type");
      out = eng.project(js[0].ctx, js[0].a);
      break;
    case Rule::subst:
    case Rule::subst_eq_type:
    case Rule::subst_eq_term: {
      need(canon, 2);
      const bool eq = rule != Rule::subst;
      need_form(canon[0], eq ? Form::term_eq : Form::term,
                eq ? "term equality" : "term");
      if (rule == Rule::subst_eq_type) need_form(canon[1], Form::type, "type");
      if (rule == Rule::subst_eq_term) need_form(canon[1], Form::term, "term");
      split_at(js[0], js[1], position);
      if (eng.length(js[1].ctx) == position)
        side("second premise has no entry at position " +
             std::to_string(position + 1));
      if (eng.entry(js[1].ctx, position + 1) != js[0].c)
        side("substituted variable's type differs from the term's type");
      out = eq ? eng.subst_eq(js[0], js[1]) : eng.substitute(js[1], position, js[0].a);
      break;
    }
    case Rule::refl_type:
      need(canon, 1);
      need_form(canon[0], Form::type, "type");
      out = {js[0].ctx, Form::type_eq, js[0].a, js[0].a, -1};
      break;
    case Rule::refl_term:
      need(canon, 1);
      need_form(canon[0], Form::term, "term");
      out = {js[0].ctx, Form::term_eq, js[0].a, js[0].a, js[0].c};
      break;
    case Rule::sym_type:
      need(canon, 1);
      need_form(canon[0], Form::type_eq, "type equality");
      out = {js[0].ctx, Form::type_eq, js[0].b, js[0].a, -1};
      break;
    case Rule::sym_term:
      need(canon, 1);
      need_form(canon[0], Form::term_eq, "term equality");
      out = {js[0].ctx, Form::term_eq, js[0].b, js[0].a, js[0].c};
      break;
    case Rule::trans_type:
      need(canon, 2);
      need_form(canon[0], Form::type_eq, "type equality");
      need_form(canon[1], Form::type_eq, "type equality");
      same_context(js[0], js[1]);
      if (js[0].b != js[1].a) side("middle types differ");
      out = {js[0].ctx, Form::type_eq, js[0].a, js[1].b, -1};
      break;
    case Rule::trans_term:
      need(canon, 2);
      need_form(canon[0], Form::term_eq, "term equality");
      need_form(canon[1], Form::term_eq, "term equality");
      same_context(js[0], js[1]);
      if (js[0].b != js[1].a || js[0].c != js[1].c) side("middle terms differ");
      out = {js[0].ctx, Form::term_eq, js[0].a, js[1].b, js[0].c};
      break;
    case Rule::conv_term:
    case Rule::conv_term_eq:
      need(canon, 2);
      need_form(canon[0], Form::type_eq, "type equality");
      need_form(canon[1], rule == Rule::conv_term ? Form::term : Form::term_eq,
                rule == Rule::conv_term ? "term" : "term equality");
      same_context(js[0], js[1]);
      if (js[1].c != js[0].a) side("term's type differs from the equation's left side");
      out = js[1];
      out.c = js[0].b;
      break;
  }
  return eng.export_judgement(out);
}

// ---------------------------------------------------------------------------
// Free theories

namespace {

std::vector<ContextEntry> basic_context(const Structure& x, TypeId t,
                                        std::vector<Expression>& vars) {
  const int n = x.degree(t);
  std::vector<ContextEntry> ctx;
  vars.clear();
  for (int i = 1; i < n; ++i) {
    TypeId ti = x.iterated_boundary(t, n - i);
    ctx.push_back({"x" + std::to_string(i), Expression::apply(x.type_name(ti), vars)});
    vars.push_back(Expression::canonical_variable(i));
  }
  return ctx;
}

}  // namespace

std::vector<Judgement> basic_judgements(const Structure& x) {
  std::vector<Judgement> out;
  std::vector<Expression> vars;
  for (TypeId t = 0; t < static_cast<TypeId>(x.type_count()); ++t) {
    auto ctx = basic_context(x, t, vars);
    out.push_back(Judgement::type_judgement(std::move(ctx),
                                            Expression::apply(x.type_name(t), vars)));
  }
  for (TermId a = 0; a < static_cast<TermId>(x.term_count()); ++a) {
    const TypeId t = x.term_type(a);
    auto ctx = basic_context(x, t, vars);
    out.push_back(Judgement::term_judgement(std::move(ctx),
                                            Expression::apply(x.term_name(a), vars),
                                            Expression::apply(x.type_name(t), vars)));
  }
  return out;
}

SaturationBounds default_bounds(const Structure& x, const RuleSet& rules, int n) {
  SaturationBounds b;
  b.max_degree = n;
  const int maxdeg = x.max_degree();
  if (rules.substitution && rules.weakening)
    b.internal_degree = n + maxdeg;
  else if (rules.substitution)
    b.internal_degree = std::max(n, maxdeg);
  else
    b.internal_degree = n;
  b.max_expr_depth = maxdeg + 1;
  return b;
}

namespace {

class Saturation {
 public:
  Saturation(const RuleSet& rules, const SaturationBounds& bounds)
      : rules_(rules), bounds_(bounds) {}

  Engine& engine() { return eng_; }

  void seed(const Judgement& j) { emit(eng_.import_judgement(j)); }

  void run() {
    while (!queue_.empty()) {
      JudgId id = queue_.front();
      queue_.pop_front();
      process(id);
    }
  }

  std::vector<Judgement> output() const {
    std::vector<std::pair<int, std::string>> keys;
    std::vector<Judgement> out;
    for (JudgId id = 0; id < static_cast<JudgId>(eng_.judgement_count()); ++id) {
      const J& j = eng_.judgement(id);
      if (eng_.length(j.ctx) + 1 <= bounds_.max_degree)
        out.push_back(eng_.export_judgement(j));
    }
    std::vector<std::size_t> order(out.size());
    std::vector<std::string> text(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      order[i] = i;
      text[i] = to_string(out[i]);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::make_pair(out[a].degree(), std::cref(text[a])) <
             std::make_pair(out[b].degree(), std::cref(text[b]));
    });
    std::vector<Judgement> sorted;
    sorted.reserve(out.size());
    for (auto i : order) sorted.push_back(std::move(out[i]));
    return sorted;
  }

  std::size_t total() const { return eng_.judgement_count(); }

 private:
  void emit(const J& j) {
    if (eng_.length(j.ctx) + 1 > bounds_.internal_degree) return;
    if (eng_.max_depth(j) > bounds_.max_expr_depth)
      throw BoundOverflow("expression depth bound " +
                              std::to_string(bounds_.max_expr_depth) + " exceeded",
                          eng_.export_judgement(j));
    auto [id, fresh] = eng_.intern(j);
    if (fresh) queue_.push_back(id);
  }

  template <class T>
  static void grow(std::vector<T>& v, std::size_t n) {
    if (v.size() < n) v.resize(n);
  }

  void index(JudgId id) {
    const J& j = eng_.judgement(id);
    grow(under_prefix_, eng_.context_count());
    grow(types_, eng_.context_count());
    grow(by_ctx_, eng_.context_count());
    const int len = eng_.length(j.ctx);
    for (int p = 0; p <= len; ++p) under_prefix_[eng_.prefix(j.ctx, p)].push_back(id);
    if (j.form == Form::type) types_[j.ctx].push_back(j.a);
    if (j.form == Form::term) terms_[key(j.ctx, j.c)].push_back(j.a);
    if (rules_.equality) by_ctx_[j.ctx].push_back(id);
  }

  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  void process(JudgId id) {
    index(id);
    const J j = eng_.judgement(id);
    const int len = eng_.length(j.ctx);
    const bool can_grow = len + 1 < bounds_.internal_degree;

    if (rules_.weakening && can_grow) {
      for (int p = 0; p <= len; ++p) {
        const CtxId c = eng_.prefix(j.ctx, p);
        for (std::size_t k = 0; k < types_[c].size(); ++k)
          emit(eng_.weaken(j, p, types_[c][k]));
      }
    }
    if (rules_.weakening && j.form == Form::type) {
      for (std::size_t k = 0; k < under_prefix_[j.ctx].size(); ++k) {
        const J other = eng_.judgement(under_prefix_[j.ctx][k]);
        if (eng_.length(other.ctx) + 1 < bounds_.internal_degree)
          emit(eng_.weaken(other, len, j.a));
      }
    }
    if (rules_.projection && j.form == Form::type && can_grow)
      emit(eng_.project(j.ctx, j.a));

    if (rules_.substitution) {
      for (int p = 0; p < len; ++p) {
        const CtxId c = eng_.prefix(j.ctx, p);
        auto it = terms_.find(key(c, eng_.entry(j.ctx, p + 1)));
        if (it == terms_.end()) continue;
        for (std::size_t k = 0; k < it->second.size(); ++k)
          emit(eng_.substitute(j, p, it->second[k]));
      }
      if (j.form == Form::term) {
        if (auto c = eng_.child(j.ctx, j.c); c && *c < static_cast<CtxId>(under_prefix_.size())) {
          for (std::size_t k = 0; k < under_prefix_[*c].size(); ++k) {
            const J other = eng_.judgement(under_prefix_[*c][k]);
            emit(eng_.substitute(other, len, j.a));
          }
        }
      }
    }
    if (rules_.equality) equality_rules(j);
  }

  void equality_rules(const J& j) {
    const int len = eng_.length(j.ctx);
    switch (j.form) {
      case Form::type:
        emit({j.ctx, Form::type_eq, j.a, j.a, -1});
        break;
      case Form::term:
        emit({j.ctx, Form::term_eq, j.a, j.a, j.c});
        break;
      case Form::type_eq:
        emit({j.ctx, Form::type_eq, j.b, j.a, -1});
        break;
      case Form::term_eq:
        emit({j.ctx, Form::term_eq, j.b, j.a, j.c});
        break;
    }
    // Pairs within one context: transitivity and conversion.
    for (std::size_t k = 0; k < by_ctx_[j.ctx].size(); ++k) {
      const J o = eng_.judgement(by_ctx_[j.ctx][k]);
      for (int side = 0; side < 2; ++side) {
        const J& l = side ? o : j;
        const J& r = side ? j : o;
        if (l.form == Form::type_eq && r.form == Form::type_eq && l.b == r.a)
          emit({j.ctx, Form::type_eq, l.a, r.b, -1});
        if (l.form == Form::term_eq && r.form == Form::term_eq && l.b == r.a &&
            l.c == r.c)
          emit({j.ctx, Form::term_eq, l.a, r.b, l.c});
        if (l.form == Form::type_eq && (r.form == Form::term || r.form == Form::term_eq) &&
            r.c == l.a) {
          J c = r;
          c.c = l.b;
          emit(c);
        }
      }
    }
    // Equality substitution, with j as either premise.
    if (j.form == Form::term_eq) {
      if (auto c = eng_.child(j.ctx, j.c); c && *c < static_cast<CtxId>(under_prefix_.size())) {
        for (std::size_t k = 0; k < under_prefix_[*c].size(); ++k) {
          const J other = eng_.judgement(under_prefix_[*c][k]);
          if (other.form == Form::type || other.form == Form::term)
            emit(eng_.subst_eq(j, other));
        }
      }
    }
    if (j.form == Form::type || j.form == Form::term) {
      for (int p = 0; p < len; ++p) {
        const CtxId c = eng_.prefix(j.ctx, p);
        const ExprId ty = eng_.entry(j.ctx, p + 1);
        for (std::size_t k = 0; k < by_ctx_[c].size(); ++k) {
          const J eq = eng_.judgement(by_ctx_[c][k]);
          if (eq.form == Form::term_eq && eq.c == ty) emit(eng_.subst_eq(eq, j));
        }
      }
    }
  }

  RuleSet rules_;
  SaturationBounds bounds_;
  Engine eng_;
  std::deque<JudgId> queue_;
  std::vector<std::vector<JudgId>> under_prefix_;
  std::vector<std::vector<ExprId>> types_;
  std::unordered_map<std::uint64_t, std::vector<ExprId>> terms_;
  std::vector<std::vector<JudgId>> by_ctx_;
};

}  // namespace

SaturationResult saturate(const Structure& x, const RuleSet& rules,
                          const SaturationBounds& bounds) {
  if (!rules.decent())
    throw std::invalid_argument("rule set " + rules.name() +
                                " is not decent: projection requires weakening");
  if (bounds.internal_degree < bounds.max_degree)
    throw std::invalid_argument("internal degree bound below output bound");
  Saturation sat(rules, bounds);
  for (const auto& j : basic_judgements(x)) sat.seed(j);
  sat.run();
  return {sat.output(), sat.total()};
}

}  // namespace gatmonad
