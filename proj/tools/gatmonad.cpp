// Command-line front end. Exit codes: 0 success, 1 a check failed, 2 usage
// or input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gatmonad/laws.hpp"

using namespace gatmonad;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json parse_json_arg(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("cannot parse ") + what + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::map<std::string, std::string> parse_rename(const std::string& text) {
  std::map<std::string, std::string> out;
  if (text.empty()) return out;
  const Json j = parse_json_arg(text, "map");
  if (!j.is_object()) throw UsageError("a map is a JSON object of names");
  for (const auto& [k, v] : j.items()) out[k] = v.get<std::string>();
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands.

int run_validate(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open " + file);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(file + ": " + e.what());
  }
  const StructureDecl decl = parse_structure_json(j);
  const auto violations = validate(decl);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cout << "invalid: " << v.message << "\n";
    return kFailed;
  }
  auto x = make_structure(decl);
  std::cout << "ok: " << x->type_count() << " types, " << x->term_count()
            << " terms, max degree " << x->max_degree() << "\n";
  return kOk;
}

int run_freegat(const std::string& file, const std::string& rules_name, int n, int internal,
                int depth) {
  auto x = load_structure(file);
  const RuleSet rules = RuleSet::parse(rules_name);
  if (!rules.decent()) throw UsageError("rule set " + rules_name + " is not decent");
  SaturationBounds b = default_bounds(*x, rules, n);
  if (internal > 0) b.internal_degree = internal;
  if (depth > 0) b.max_expr_depth = depth;
  for (const auto& j : saturate(*x, rules, b).judgements) std::cout << to_string(j) << "\n";
  return kOk;
}

int run_star(const std::string& psi_text, const std::string& phi_text) {
  const Heap psi = parse_heap(psi_text);
  std::vector<Heap> family;
  for (const auto& part : split(phi_text, ';')) family.push_back(parse_heap(part));
  std::cout << to_string(star(psi, family)) << "\n";
  return kOk;
}

int run_compose_inc(const std::string& beta, const std::string& alpha) {
  std::cout << to_string(compose(parse_inclist(beta), parse_inclist(alpha))) << "\n";
  return kOk;
}

int run_delta(const std::string& file, const std::string& element) {
  auto x = load_structure(file);
  const SPElement e = sp_from_json(*x, parse_json_arg(element, "element"));
  if (!is_valid(*x, e)) throw UsageError("element is not a valid element of SPX");
  const PSElement d = delta(e);
  std::cout << to_json(*x, d).dump() << "\n" << to_string(render_judgement(*x, d)) << "\n";
  return kOk;
}

// Internal bound needed to parse an element of F(FX): the largest degree
// among its labels or heads.
int label_degree(const Json& j) {
  int d = 0;
  if (j.contains("inc") && j.at("inc").is_array() && !j.at("inc").empty())
    d = std::max(d, j.at("inc").back().get<int>());
  if (j.contains("heap") && j.at("heap").is_array())
    d = std::max(d, static_cast<int>(j.at("heap").size()));
  if (j.contains("nodes") && j.at("nodes").is_array())
    for (const auto& n : j.at("nodes")) d = std::max(d, label_degree(n));
  return d;
}

int run_mult(const std::string& monad, const std::string& file, const std::string& element,
             int internal) {
  auto x = load_structure(file);
  const Json j = parse_json_arg(element, "element");
  if (!j.is_object()) throw UsageError("element must be a JSON object");
  const MonadKind k = parse_monad(monad);
  const int b = internal > 0 ? internal : std::max(label_degree(j), x->max_degree());
  const bool has_term = j.contains("term") && !j.at("term").is_null();
  Json out;
  switch (k) {
    case MonadKind::W:
    case MonadKind::P: {
      const bool proj = k == MonadKind::P;
      auto fx = WeakeningImage::build(x, b, proj);
      auto w = wtype_from_json(*fx->structure(), j);
      if (!w || !is_valid(*fx->structure(), *w)) throw UsageError("not an element of F(FX)");
      PElement e{*w, std::nullopt};
      if (has_term) {
        e.term = parse_payload(*fx->structure(), j.at("term"), proj);
        if (!e.term) throw UsageError("cannot read the term of the element");
      }
      const PElement r = mult_P(*fx, e);
      out = to_json(*x, r.type);
      if (r.term) out["term"] = payload_json(*x, *r.term, proj);
      break;
    }
    case MonadKind::S: {
      auto sx = apply_S(x, b);
      auto s = stype_from_json(*sx->structure(), j);
      if (!s || !is_valid(*sx->structure(), *s)) throw UsageError("not an element of S(SX)");
      const SType r = mult_S(*sx, *s);
      out = to_json(*x, r);
      if (has_term) {
        auto a = sx->structure()->parse_term(j.at("term"));
        if (!a || sx->term(*a).type != s->head)
          throw UsageError("cannot read the term of the element");
        out["term"] = x->term_json(sx->term(*a).term);
      }
      break;
    }
    case MonadKind::T: {
      auto tx = apply_T(x, b);
      const PSElement e = ps_from_json(*tx->structure(), j);
      if (!is_valid(*tx->structure(), e)) throw UsageError("not an element of T(TX)");
      out = to_json(*x, mult_T(*tx, e));
      break;
    }
  }
  std::cout << out.dump() << "\n";
  return kOk;
}

int run_render(const std::string& heap, const std::string& format) {
  const Heap h = parse_heap(heap);
  std::cout << (format == "dot" ? to_dot(h) : to_ascii(h));
  return kOk;
}

struct CheckOptions {
  std::string file;
  std::string suite;
  std::vector<std::string> monads;
  std::vector<std::string> rules;
  int n = 0;
  int internal = 0;
  bool full = false;
  bool json = false;
  std::string other, over, left_map, right_map;
};

int run_check(const CheckOptions& o) {
  auto x = load_structure(o.file);
  std::vector<CheckReport> reports;
  auto monads = [&](std::vector<std::string> fallback) {
    std::vector<MonadKind> out;
    for (const auto& m : o.monads.empty() ? fallback : o.monads) out.push_back(parse_monad(m));
    return out;
  };
  if (o.suite == "monad-laws") {
    for (MonadKind k : monads({"w", "p", "s", "t"})) {
      const int n = o.n > 0 ? o.n : (k == MonadKind::T ? 3 : 4);
      const int b = o.internal > 0 ? o.internal : default_internal(k, *x, n);
      reports.push_back(check_monad_laws(k, x, n, b, Mutation::none, o.full));
    }
  } else if (o.suite == "cartesian") {
    const int n = o.n > 0 ? o.n : 3;
    for (MonadKind k : monads({"w", "p", "s"}))
      for (bool mult : {false, true}) {
        const int b = o.internal > 0 ? o.internal : default_internal(k, *x, n);
        reports.push_back(check_cartesian(k, mult, x, n, b));
      }
  } else if (o.suite == "beck") {
    const int n = o.n > 0 ? o.n : 3;
    reports.push_back(check_beck(x, n, o.internal > 0 ? o.internal : x->max_degree() + 3));
  } else if (o.suite == "middle-unit") {
    reports.push_back(check_middle_unit(x, o.n > 0 ? o.n : 3));
  } else if (o.suite == "pullbacks") {
    const int n = o.n > 0 ? o.n : 3;
    auto y = o.other.empty() ? x : load_structure(o.other);
    StructurePtr z;
    Map left = Map::identity(x), right = Map::identity(y);
    if (o.over.empty()) {
      z = terminal(std::max({x->max_degree(), y->max_degree(), 1}));
      left = bang(x, z);
      right = bang(y, z);
    } else {
      z = load_structure(o.over);
      left = map_by_name(x, z, parse_rename(o.left_map));
      right = map_by_name(y, z, parse_rename(o.right_map));
    }
    for (MonadKind k : monads({"w", "p", "s", "t"}))
      reports.push_back(check_pullback_preservation(k, left, right, n));
  } else if (o.suite == "oracle") {
    const std::vector<std::string> all{"none", "w", "wp", "s", "ws", "wps"};
    for (const auto& name : o.rules.empty() ? all : o.rules) {
      const RuleSet r = RuleSet::parse(name);
      if (!r.decent()) throw UsageError("rule set " + name + " is not decent");
      const int n = o.n > 0 ? o.n : (r.weakening && r.projection && r.substitution ? 4 : 5);
      reports.push_back(check_oracle(x, r, n));
    }
  } else {
    throw UsageError("unknown suite " + o.suite);
  }
  bool ok = true;
  Json all = Json::array();
  for (const auto& r : reports) {
    ok = ok && r.passed;
    if (o.json)
      all.push_back(r.to_json());
    else
      std::cout << r.text();
  }
  if (o.json) std::cout << all.dump(2) << "\n";
  return ok ? kOk : kFailed;
}

int run_counterexample(bool json) {
  const CheckReport r = counterexample_T();
  if (json) {
    std::cout << r.to_json().dump(2) << "\n";
  } else {
    std::cout << r.text();
    if (r.passed)
      std::cout << "  witness: " << r.witness.dump() << "\n"
                << "  " << r.failure << "\n";
  }
  return r.passed ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free generalised algebraic theories as monads on presheaves"};
  app.require_subcommand(1);

  std::string file, element, rules = "none", monad, heap, format = "ascii", psi, phi, alpha,
                              beta;
  int n = 0, internal = 0, depth = 0;
  bool json = false;
  CheckOptions check;

  auto* validate_cmd = app.add_subcommand("validate", "Check a structure file");
  validate_cmd->add_option("file", file)->required();

  auto* freegat = app.add_subcommand("freegat", "Derivable judgements of the free D-GAT");
  freegat->add_option("file", file)->required();
  freegat->add_option("--rules", rules)->check(CLI::IsMember({"none", "w", "wp", "s", "ws", "wps"}));
  freegat->add_option("--max-degree", n)->required()->check(CLI::PositiveNumber);
  freegat->add_option("--internal", internal)->check(CLI::PositiveNumber);
  freegat->add_option("--expr-depth", depth)->check(CLI::PositiveNumber);

  auto* star_cmd = app.add_subcommand("star", "ψ ⋆ φ for a compatible heap family");
  star_cmd->add_option("--psi", psi)->required();
  star_cmd->add_option("--phi", phi, "family separated by ';'")->required();

  auto* compose_cmd = app.add_subcommand("compose-inc", "βα for inc-lists");
  compose_cmd->add_option("--beta", beta)->required();
  compose_cmd->add_option("--alpha", alpha)->required();

  auto* delta_cmd = app.add_subcommand("delta", "δ on an element of SPX");
  delta_cmd->add_option("file", file)->required();
  delta_cmd->add_option("--element", element)->required();

  auto* mult_cmd = app.add_subcommand("mult", "μ on an element of F(FX)");
  mult_cmd->add_option("file", file)->required();
  mult_cmd->add_option("--monad", monad)->required()->check(CLI::IsMember({"w", "p", "s", "t"}));
  mult_cmd->add_option("--element", element)->required();
  mult_cmd->add_option("--internal", internal, "degree bound of FX")->check(CLI::PositiveNumber);

  auto* render_cmd = app.add_subcommand("render", "Draw a heap");
  render_cmd->add_option("--heap", heap)->required();
  render_cmd->add_option("--format", format)->check(CLI::IsMember({"dot", "ascii"}));

  auto* check_cmd = app.add_subcommand("check", "Run a law suite");
  check_cmd->add_option("file", check.file)->required();
  check_cmd->add_option("--suite", check.suite)
      ->required()
      ->check(CLI::IsMember({"monad-laws", "cartesian", "beck", "middle-unit", "pullbacks", "oracle"}));
  check_cmd->add_option("--monad", check.monads)->check(CLI::IsMember({"w", "p", "s", "t"}));
  check_cmd->add_option("--rules", check.rules)
      ->check(CLI::IsMember({"none", "w", "wp", "s", "ws", "wps"}));
  check_cmd->add_option("-N,--max-degree", check.n)->check(CLI::PositiveNumber);
  check_cmd->add_option("--internal", check.internal)->check(CLI::PositiveNumber);
  check_cmd->add_flag("--full", check.full, "T laws on every outer heap");
  check_cmd->add_option("--other", check.other, "second structure of the cospan");
  check_cmd->add_option("--over", check.over, "apex of the cospan (default terminal)");
  check_cmd->add_option("--left-map", check.left_map, "renames for FILE -> apex");
  check_cmd->add_option("--right-map", check.right_map, "renames for other -> apex");
  check_cmd->add_flag("--json", check.json);

  auto* cex = app.add_subcommand("counterexample", "μ^T is not cartesian on {A:1}");
  cex->add_flag("--json", json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) return run_validate(file);
    if (*freegat) return run_freegat(file, rules, n, internal, depth);
    if (*star_cmd) return run_star(psi, phi);
    if (*compose_cmd) return run_compose_inc(beta, alpha);
    if (*delta_cmd) return run_delta(file, element);
    if (*mult_cmd) return run_mult(monad, file, element, internal);
    if (*render_cmd) return run_render(heap, format);
    if (*check_cmd) return run_check(check);
    if (*cex) return run_counterexample(json);
  } catch (const BoundOverflow& e) {
    std::cerr << "error: " << e.what() << " at " << to_string(e.frontier()) << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
