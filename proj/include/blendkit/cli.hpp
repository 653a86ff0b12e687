#pragma once

// Command layer of the `blendkit` tool. Each command reads declarations from
// a SpecDocument, runs one library operation and reports named fields plus
// declarations in DSL form (or JSON). Exit status: 0 ok, 1 a law or
// satisfaction violation was found, 2 input error, 3 resource cap hit.

#include <chrono>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "blendkit/blend.hpp"
#include "blendkit/config.hpp"
#include "blendkit/dsl.hpp"
#include "blendkit/error.hpp"
#include "blendkit/json_io.hpp"
#include "blendkit/laws.hpp"
#include "blendkit/msa.hpp"
#include "blendkit/partial.hpp"
#include "blendkit/pl.hpp"
#include "blendkit/theories.hpp"
#include "blendkit/three_halves.hpp"

namespace blendkit::cli {

using dsl::Declaration;
using dsl::DeclKind;
using dsl::json;
using dsl::Logic;
using dsl::SpecDocument;

enum ExitCode : int { Ok = 0, Violation = 1, InputError = 2, ResourceCap = 3 };

struct Invocation {
  std::string command;
  std::vector<std::string> args;
  std::optional<std::string> file;
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  std::optional<int> max_carrier;
  std::optional<int> depth;
  /// blend / amalgamate: a signature name for dom θ0, or "minimal".
  std::optional<std::string> dom;
  bool json = false;
  bool dot = false;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "validate", "compose",  "factorize",  "pushout",      "blend",        "reduct",       "satisfy",
      "entails",  "classify-theory-morphism", "amalgamate", "check-square", "verify-laws", "consistent", "export"};
  return names;
}

/// What a command produced, rendered either as text or as one JSON object.
struct Report {
  std::vector<std::pair<std::string, json>> fields;
  /// Declarations shown in DSL form; sentences in them resolve against `scope`.
  std::vector<Declaration> declarations;
  SpecDocument scope;
  std::optional<std::string> raw;
  int status = Ok;

  void set(const std::string& key, json value) { fields.emplace_back(key, std::move(value)); }
};

inline void render(std::ostream& os, const Report& r, bool as_json) {
  if (r.raw) {
    os << *r.raw;
    return;
  }
  if (as_json) {
    json out = json::object();
    for (const auto& [k, v] : r.fields) out[k] = v;
    if (!r.declarations.empty()) {
      json decls = json::array();
      for (const auto& d : r.declarations) decls.push_back(dsl::declaration_to_json(r.scope, d));
      out["declarations"] = decls;
    }
    os << out.dump(2) << '\n';
    return;
  }
  for (const auto& d : r.declarations) {
    dsl::write_declaration(os, r.scope, d);
    os << '\n';
  }
  for (const auto& [k, v] : r.fields) os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
}

// ---------------------------------------------------------------------------
// Per-logic access to the document

template <class I>
struct LogicOf;

template <>
struct LogicOf<pl::Institution> {
  static constexpr Logic logic = Logic::PL;
  using Sig = pl::Signature;
  using Theory = dsl::PLTheory;
  static pl::Institution institution(const SpecDocument&) { return {}; }
  static dsl::PLPartial partial(const SpecDocument& doc, const std::string& n) { return dsl::pl_partial(doc, n); }
  static std::string sentence_text(const pl::Sentence& s, const pl::Signature&) { return pl::to_string(s); }
};

template <>
struct LogicOf<msa::Institution> {
  static constexpr Logic logic = Logic::MSA;
  using Sig = msa::Signature;
  using Theory = dsl::MSATheory;
  static msa::Institution institution(const SpecDocument& doc) { return msa::Institution(doc.system()); }
  static dsl::MSAPartial partial(const SpecDocument& doc, const std::string& n) { return dsl::msa_partial(doc, n); }
  static std::string sentence_text(const msa::Sentence& s, const msa::Signature& sig) { return msa::to_string(s, &sig); }
};

template <class T>
const T& payload(const SpecDocument& doc, DeclKind k, const std::string& name, Logic logic) {
  const auto& d = doc.get(k, name);
  if (d.logic != logic) throw ValidationError(dsl::to_string(k) + " '" + name + "' belongs to the other logic");
  return std::get<T>(d.value);
}

/// Names new signatures and looks up existing ones so that output
/// declarations can refer to them.
template <class I>
class Namer {
 public:
  using Sig = typename LogicOf<I>::Sig;

  explicit Namer(const SpecDocument& doc, Report& r) : doc_(&doc), report_(&r) {}

  /// Name of `sig`: a declared signature with that value, or a fresh
  /// declaration `hint` added to the report.
  std::string name(const Sig& sig, const std::string& hint) {
    for (const auto& d : doc_->declarations)
      if (d.kind == DeclKind::Signature && d.logic == LogicOf<I>::logic && std::get<Sig>(d.value) == sig) return d.name;
    for (const auto& d : report_->declarations)
      if (d.kind == DeclKind::Signature && std::get<Sig>(d.value) == sig) return d.name;
    std::string n = hint;
    for (int i = 2; taken(n); ++i) n = hint + std::to_string(i);
    add({DeclKind::Signature, n, LogicOf<I>::logic, {}, sig, {}});
    return n;
  }

  void morphism(const std::string& n, const typename I::Morphism& m) {
    add({DeclKind::Morphism, n, LogicOf<I>::logic, {name(m.source, "sig"), name(m.target, "sig")}, m, {}});
  }
  void partial(const std::string& n, const Partial<I>& p) {
    add({DeclKind::PartialMorphism, n, LogicOf<I>::logic, {name(p.witness.target, "sig"), name(p.total.target, "sig")}, p, {}});
  }
  void model(const std::string& n, const typename I::Model& m) {
    add({DeclKind::Model, n, LogicOf<I>::logic, {name(m.signature, "sig")}, m, {}});
  }

 private:
  bool taken(const std::string& n) const {
    return doc_->find(DeclKind::Signature, n) || report_->scope.find(DeclKind::Signature, n);
  }
  void add(Declaration d) {
    report_->scope.declarations.push_back(d);
    report_->declarations.push_back(std::move(d));
  }

  const SpecDocument* doc_;
  Report* report_;
};

// ---------------------------------------------------------------------------
// Commands

inline void need_args(const Invocation& inv, std::size_t n, const std::string& usage) {
  if (inv.args.size() != n) throw ValidationError("usage: blendkit " + inv.command + " " + usage);
}

inline Logic logic_of_morphism(const SpecDocument& doc, const std::string& name) {
  return dsl::morphism_decl(doc, name).logic;
}

template <class I>
Report compose_cmd(const SpecDocument& doc, const Invocation& inv) {
  auto inst = LogicOf<I>::institution(doc);
  auto f = LogicOf<I>::partial(doc, inv.args[0]);
  auto g = LogicOf<I>::partial(doc, inv.args[1]);
  if (!(ptarget(inst, f) == psource(inst, g)))
    throw ValidationError("'" + inv.args[0] + "' does not end where '" + inv.args[1] + "' starts");
  Report r;
  r.scope = doc;
  Namer<I> names(doc, r);
  auto c = compose(inst, f, g);
  names.partial("composite", c);
  r.set("total", is_total_morphism(inst, c));
  return r;
}

template <class I>
Report factorize_cmd(const SpecDocument& doc, const Invocation& inv) {
  auto inst = LogicOf<I>::institution(doc);
  auto f = LogicOf<I>::partial(doc, inv.args[0]);
  Report r;
  r.scope = doc;
  Namer<I> names(doc, r);
  auto fact = factorize_partial(inst, f);
  names.name(ptarget(inst, fact.surjection), "image");
  if (is_total_morphism(inst, f))
    names.morphism("surjection", fact.surjection.total);
  else
    names.partial("surjection", fact.surjection);
  names.morphism("inclusion", fact.inclusion.total);
  r.set("system", inst.name());
  return r;
}

template <class I>
Report pushout_cmd(const SpecDocument& doc, const Invocation& inv) {
  auto inst = LogicOf<I>::institution(doc);
  auto f1 = LogicOf<I>::partial(doc, inv.args[0]);
  auto f2 = LogicOf<I>::partial(doc, inv.args[1]);
  if (!is_total_morphism(inst, f1) || !is_total_morphism(inst, f2))
    throw ValidationError("pushout takes two total morphisms; use blend for partial spans");
  Report r;
  r.scope = doc;
  Namer<I> names(doc, r);
  auto k = pushout(inst, f1.total, f2.total);
  names.name(inst.target(k.left_leg), "apex");
  names.morphism("left_leg", k.left_leg);
  names.morphism("right_leg", k.right_leg);
  r.set("commutes", cocone_commutes(inst, k));
  return r;
}

template <class I>
PartialSpan<I> span_of(const SpecDocument& doc, const std::string& name) {
  const auto& s = payload<dsl::SpanDecl>(doc, DeclKind::Span, name, LogicOf<I>::logic);
  return {LogicOf<I>::partial(doc, s.left), LogicOf<I>::partial(doc, s.right)};
}

template <class I>
PartialCocone<I> cocone_for(const I& inst, const SpecDocument& doc, const PartialSpan<I>& span,
                            const std::optional<std::string>& dom_name) {
  if (!dom_name) return lax_cocone_with_amalgamation(inst, span);
  if (*dom_name == "minimal") return lax_cocone_with_amalgamation(inst, span, minimal_dom_theta0(inst, span));
  const auto& d = payload<typename LogicOf<I>::Sig>(doc, DeclKind::Signature, *dom_name, LogicOf<I>::logic);
  return lax_cocone_with_amalgamation(inst, span, d);
}

template <class I>
Report blend_cmd(const SpecDocument& doc, const Invocation& inv) {
  auto inst = LogicOf<I>::institution(doc);
  auto span = span_of<I>(doc, inv.args[0]);
  auto k = cocone_for(inst, doc, span, inv.dom);
  Report r;
  r.scope = doc;
  if (inv.dot) {
    r.raw = to_dot(inst, k, inv.args[0]);
    return r;
  }
  Namer<I> names(doc, r);
  names.name(dom(inst, k.theta0), "dom_theta0");
  names.name(inst.target(k.stage1[0].left_leg), "stage1_left");
  names.name(inst.target(k.stage1[1].left_leg), "stage1_right");
  names.name(apex(inst, k), "apex");
  names.morphism("u1", k.stage1[0].left_leg);
  names.morphism("v1", k.stage1[0].right_leg);
  names.morphism("u2", k.stage1[1].left_leg);
  names.morphism("v2", k.stage1[1].right_leg);
  names.morphism("w1", k.stage2.left_leg);
  names.morphism("w2", k.stage2.right_leg);
  names.partial("theta0", k.theta0);
  names.morphism("theta1", k.theta1.total);
  names.morphism("theta2", k.theta2.total);
  r.set("witnesses", json::array({k.witnesses[0], k.witnesses[1]}));
  r.set("strict", json::array({k.strict[0], k.strict[1]}));
  r.set("system", inst.name());
  return r;
}

template <class I>
Report reduct_cmd(const SpecDocument& doc, const Invocation& inv, const RunConfig& cfg) {
  auto inst = LogicOf<I>::institution(doc);
  auto f = LogicOf<I>::partial(doc, inv.args[0]);
  const auto& m = payload<typename I::Model>(doc, DeclKind::Model, inv.args[1], LogicOf<I>::logic);
  auto set = pmod_reduct(inst, f, m, cfg.bounds);
  Report r;
  r.scope = doc;
  Namer<I> names(doc, r);
  for (std::size_t i = 0; i < set.models.size(); ++i) names.model("R" + std::to_string(i + 1), set.models[i]);
  r.set("count", set.models.size());
  if (set.carrier_bound) r.set("carrier_bound", *set.carrier_bound);
  return r;
}

template <class I>
Report satisfy_cmd(const SpecDocument& doc, const Invocation& inv, const RunConfig& cfg) {
  auto inst = LogicOf<I>::institution(doc);
  Report r;
  r.scope = doc;
  constexpr Logic L = LogicOf<I>::logic;
  if (inv.args.size() == 2) {
    const auto& m = payload<typename I::Model>(doc, DeclKind::Model, inv.args[0], L);
    const auto& s = payload<typename I::Sentence>(doc, DeclKind::Sentence, inv.args[1], L);
    if (!inst.sentence_over(m.signature, s)) throw ValidationError("sentence and model are over different signatures");
    r.set("satisfied", inst.satisfies(m, s));
    return r;
  }
  need_args(inv, 3, "MORPHISM MODEL SENTENCE | MODEL SENTENCE");
  auto f = LogicOf<I>::partial(doc, inv.args[0]);
  const auto& m = payload<typename I::Model>(doc, DeclKind::Model, inv.args[1], L);
  const auto& s = payload<typename I::Sentence>(doc, DeclKind::Sentence, inv.args[2], L);
  auto translated = psen_translate(inst, f, s);
  if (!translated) {
    r.set("translation", "undefined");
    return r;
  }
  auto rep = check_satisfaction(inst, f, m, s, cfg.bounds);
  r.set("translation", LogicOf<I>::sentence_text(rep.translated, ptarget(inst, f)));
  r.set("target_satisfies", rep.target_holds);
  r.set("reducts", rep.reducts.size());
  r.set("violations", rep.violations.size());
  if (rep.carrier_bound) r.set("carrier_bound", *rep.carrier_bound);
  if (!rep.ok()) r.status = Violation;
  return r;
}

template <class I>
Report entails_cmd(const SpecDocument& doc, const Invocation& inv, const RunConfig& cfg) {
  auto inst = LogicOf<I>::institution(doc);
  auto t = dsl::theory_ref<typename LogicOf<I>::Theory, typename LogicOf<I>::Sig>(doc, inv.args[0]);
  const auto& s = payload<typename I::Sentence>(doc, DeclKind::Sentence, inv.args[1], LogicOf<I>::logic);
  Report r;
  r.set("entailed", entails(inst, t, s, cfg.bounds));
  if (auto b = semantic_bound(inst, cfg.bounds)) r.set("carrier_bound", *b);
  return r;
}

template <class I>
Report classify_cmd(const SpecDocument& doc, const Invocation& inv, const RunConfig& cfg) {
  auto inst = LogicOf<I>::institution(doc);
  auto f = LogicOf<I>::partial(doc, inv.args[0]);
  using T = typename LogicOf<I>::Theory;
  using Sig = typename LogicOf<I>::Sig;
  auto t = dsl::theory_ref<T, Sig>(doc, inv.args[1]);
  auto t2 = dsl::theory_ref<T, Sig>(doc, inv.args[2]);
  auto rep = classify_32_theory_morphism(inst, f, t, t2, cfg.bounds);
  Report r;
  r.scope = doc;
  Namer<I> names(doc, r);
  if (rep.plain) r.set("theory_morphism", *rep.plain);
  r.set("weak32", rep.weak32);
  r.set("strong32", rep.strong32);
  r.set("closed_partial", rep.closed_partial);
  r.set("strong_partial", rep.strong_partial);
  if (rep.weak32_counterexample) names.model("weak32_counterexample", *rep.weak32_counterexample);
  if (rep.strong32_counterexample) names.model("strong32_counterexample", *rep.strong32_counterexample);
  if constexpr (std::is_same_v<I, pl::Institution>) {
    pl::WeakSyntacticChecker check(cfg.bounds.depth, cfg.bounds);
    auto syn = check.check(f, t, t2);
    r.set("syntactic_weak32", syn.holds);
    r.set("syntactic_depth", cfg.bounds.depth);
    if (syn.counterexample) r.set("syntactic_counterexample", pl::to_string(*syn.counterexample));
  }
  if (rep.carrier_bound) r.set("carrier_bound", *rep.carrier_bound);
  return r;
}

template <class I>
Report amalgamate_cmd(const SpecDocument& doc, const Invocation& inv, const RunConfig& cfg) {
  auto inst = LogicOf<I>::institution(doc);
  auto span = span_of<I>(doc, inv.args[0]);
  auto k = cocone_for(inst, doc, span, inv.dom);
  constexpr Logic L = LogicOf<I>::logic;
  const auto& m0 = payload<typename I::Model>(doc, DeclKind::Model, inv.args[1], L);
  const auto& m1 = payload<typename I::Model>(doc, DeclKind::Model, inv.args[2], L);
  const auto& m2 = payload<typename I::Model>(doc, DeclKind::Model, inv.args[3], L);
  auto a = amalgamate(inst, k, m0, m1, m2, cfg.bounds);
  Report r;
  r.scope = doc;
  Namer<I> names(doc, r);
  names.name(apex(inst, k), "apex");
  names.model("amalgam", a.model);
  r.set("completions", *a.completions);
  r.set("unique", a.unique());
  if (a.carrier_bound) r.set("carrier_bound", *a.carrier_bound);
  return r;
}

template <class I>
Report check_square_cmd(const SpecDocument& doc, const Invocation& inv, const RunConfig& cfg) {
  auto inst = LogicOf<I>::institution(doc);
  const auto& q = payload<dsl::SquareDecl>(doc, DeclKind::Square, inv.args[0], LogicOf<I>::logic);
  auto get = [&](std::size_t i) {
    return payload<typename I::Morphism>(doc, DeclKind::Morphism, q.morphisms[i], LogicOf<I>::logic);
  };
  Cocone<typename I::Morphism> sq{get(0), get(1), get(2), get(3)};
  auto rep = check_amalgamation_square(inst, sq, cfg.bounds);
  Report r;
  r.scope = doc;
  Namer<I> names(doc, r);
  r.set("verdict", to_string(rep.verdict));
  r.set("span_models", rep.span_models);
  if (rep.witness) {
    names.model("witness_left", rep.witness->first);
    names.model("witness_right", rep.witness->second);
    r.set("witness_completions", rep.witness_completions);
  }
  if (rep.carrier_bound) r.set("carrier_bound", *rep.carrier_bound);
  return r;
}

template <class I>
Report consistent_cmd(const SpecDocument& doc, const Invocation& inv, const RunConfig& cfg) {
  auto inst = LogicOf<I>::institution(doc);
  const auto& g = payload<dsl::DiagramDecl>(doc, DeclKind::Diagram, inv.args[0], LogicOf<I>::logic);
  using T = typename LogicOf<I>::Theory;
  Diagram<I> d;
  std::map<std::string, std::size_t> index;
  for (const auto& n : g.nodes) {
    index[n.name] = d.nodes.size();
    d.nodes.push_back({n.name, dsl::theory_ref<T, typename LogicOf<I>::Sig>(doc, n.theory)});
  }
  for (const auto& e : g.edges)
    d.edges.push_back({e.morphism, index.at(e.from), index.at(e.to), LogicOf<I>::partial(doc, e.morphism)});
  auto found = find_diagram_model(inst, d, cfg.bounds);
  Report r;
  r.scope = doc;
  Namer<I> names(doc, r);
  r.set("consistent", found.has_value());
  if (found)
    for (std::size_t i = 0; i < found->size(); ++i) names.model("at_" + d.nodes[i].name, (*found)[i]);
  if (auto b = semantic_bound(inst, cfg.bounds)) r.set("carrier_bound", *b);
  return r;
}

inline Report validate_cmd(const SpecDocument& doc) {
  Report r;
  json counts = json::object();
  for (auto k : {DeclKind::Signature, DeclKind::Morphism, DeclKind::PartialMorphism, DeclKind::Sentence,
                 DeclKind::Model, DeclKind::Theory, DeclKind::Span, DeclKind::Square, DeclKind::Diagram})
    if (auto n = doc.count(k)) counts[dsl::detail::kind_key(k)] = n;
  r.set("status", "ok");
  r.set("declarations", counts);
  r.set("msa_system", msa::to_string(doc.system()));
  return r;
}

inline Report verify_laws_cmd(const RunConfig& cfg) {
  Report r;
  json laws = json::array();
  std::size_t failed = 0;
  std::ostringstream text;
  for (const auto& law : run_law_suite(cfg)) {
    json entry{{"law", law.name}, {"checked", law.checked}, {"violations", law.violations}};
    if (!law.ok()) {
      entry["first_violation"] = law.first_violation;
      ++failed;
    }
    laws.push_back(entry);
    text << (law.ok() ? "PASS " : "FAIL ") << law.name << " (" << law.checked << " checked";
    if (!law.ok()) text << ", " << law.violations << " violations: " << law.first_violation;
    text << ")\n";
  }
  r.set("seed", cfg.seed);
  r.set("iterations", cfg.iterations);
  r.set("laws", laws);
  r.set("failed", failed);
  if (failed) r.status = Violation;
  if (!cfg.json) r.raw = text.str() + "seed: " + std::to_string(cfg.seed) + "\nfailed: " + std::to_string(failed) + "\n";
  return r;
}

// ---------------------------------------------------------------------------
// Entry points

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// JSON when the first non-blank character is '{', DSL otherwise.
inline SpecDocument load_document(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return dsl::from_json_text(text);
  return dsl::parse(text);
}

/// Config file keys: max_carrier, pl_symbol_cap, enumeration_cap, depth,
/// universal_search_size, seed, iterations. Flags override the file.
inline RunConfig make_config(const Invocation& inv) {
  RunConfig cfg;
  if (inv.config) {
    json j;
    try {
      j = json::parse(read_file(*inv.config));
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("config: ") + e.what(), 1, e.byte);
    }
    try {
      for (const auto& [key, value] : j.items()) {
        if (key == "max_carrier")
          cfg.bounds.max_carrier = value.get<int>();
        else if (key == "pl_symbol_cap")
          cfg.bounds.pl_symbol_cap = value.get<std::size_t>();
        else if (key == "enumeration_cap")
          cfg.bounds.enumeration_cap = value.get<std::size_t>();
        else if (key == "depth")
          cfg.bounds.depth = value.get<int>();
        else if (key == "universal_search_size")
          cfg.bounds.universal_search_size = value.get<std::size_t>();
        else if (key == "seed")
          cfg.seed = value.get<std::uint64_t>();
        else if (key == "iterations")
          cfg.iterations = value.get<int>();
        else
          throw ValidationError("config: unknown key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw ValidationError(std::string("config: ") + e.what());
    }
  }
  if (inv.seed) cfg.seed = *inv.seed;
  if (inv.iterations) cfg.iterations = *inv.iterations;
  if (inv.max_carrier) cfg.bounds.max_carrier = *inv.max_carrier;
  if (inv.depth) cfg.bounds.depth = *inv.depth;
  cfg.json = inv.json;
  if (cfg.bounds.max_carrier < 0) throw ValidationError("max carrier must be non-negative");
  if (cfg.bounds.depth < 0) throw ValidationError("depth must be non-negative");
  if (cfg.iterations <= 0) throw ValidationError("iterations must be positive");
  if (cfg.bounds.enumeration_cap == 0) throw ValidationError("enumeration cap must be positive");
  return cfg;
}

/// Dispatch on the logic of the first argument's declaration.
template <class F>
Report by_logic(Logic l, F&& f) {
  if (l == Logic::PL) return f(pl::Institution{});
  return f(msa::Institution{});
}

inline Report dispatch(const Invocation& inv, const SpecDocument& doc, const RunConfig& cfg) {
  const auto& c = inv.command;
  auto arg_logic = [&](DeclKind k) { return doc.get(k, inv.args.at(0)).logic; };
  if (c == "validate") return validate_cmd(doc);
  if (c == "export") {
    Report r;
    r.raw = inv.json ? dsl::to_json(doc).dump(2) + "\n" : dsl::serialize(doc);
    return r;
  }
  if (c == "compose") {
    need_args(inv, 2, "F G");
    return by_logic(logic_of_morphism(doc, inv.args[0]),
                    [&](auto inst) { return compose_cmd<decltype(inst)>(doc, inv); });
  }
  if (c == "factorize") {
    need_args(inv, 1, "F");
    return by_logic(logic_of_morphism(doc, inv.args[0]),
                    [&](auto inst) { return factorize_cmd<decltype(inst)>(doc, inv); });
  }
  if (c == "pushout") {
    need_args(inv, 2, "F1 F2");
    return by_logic(logic_of_morphism(doc, inv.args[0]),
                    [&](auto inst) { return pushout_cmd<decltype(inst)>(doc, inv); });
  }
  if (c == "blend") {
    need_args(inv, 1, "SPAN [--dom SIG|minimal] [--dot]");
    return by_logic(arg_logic(DeclKind::Span), [&](auto inst) { return blend_cmd<decltype(inst)>(doc, inv); });
  }
  if (c == "reduct") {
    need_args(inv, 2, "F MODEL");
    return by_logic(logic_of_morphism(doc, inv.args[0]),
                    [&](auto inst) { return reduct_cmd<decltype(inst)>(doc, inv, cfg); });
  }
  if (c == "satisfy") {
    if (inv.args.size() == 2)
      return by_logic(arg_logic(DeclKind::Model), [&](auto inst) { return satisfy_cmd<decltype(inst)>(doc, inv, cfg); });
    need_args(inv, 3, "MORPHISM MODEL SENTENCE | MODEL SENTENCE");
    return by_logic(logic_of_morphism(doc, inv.args[0]),
                    [&](auto inst) { return satisfy_cmd<decltype(inst)>(doc, inv, cfg); });
  }
  if (c == "entails") {
    need_args(inv, 2, "THEORY SENTENCE");
    return by_logic(doc.get(DeclKind::Sentence, inv.args[1]).logic,
                    [&](auto inst) { return entails_cmd<decltype(inst)>(doc, inv, cfg); });
  }
  if (c == "classify-theory-morphism") {
    need_args(inv, 3, "F THEORY THEORY'");
    return by_logic(logic_of_morphism(doc, inv.args[0]),
                    [&](auto inst) { return classify_cmd<decltype(inst)>(doc, inv, cfg); });
  }
  if (c == "amalgamate") {
    need_args(inv, 4, "SPAN M0 M1 M2 [--dom SIG|minimal]");
    return by_logic(arg_logic(DeclKind::Span), [&](auto inst) { return amalgamate_cmd<decltype(inst)>(doc, inv, cfg); });
  }
  if (c == "check-square") {
    need_args(inv, 1, "SQUARE");
    return by_logic(arg_logic(DeclKind::Square),
                    [&](auto inst) { return check_square_cmd<decltype(inst)>(doc, inv, cfg); });
  }
  if (c == "consistent") {
    need_args(inv, 1, "DIAGRAM");
    return by_logic(arg_logic(DeclKind::Diagram),
                    [&](auto inst) { return consistent_cmd<decltype(inst)>(doc, inv, cfg); });
  }
  throw ValidationError("unknown command '" + c + "'");
}

/// Run one invocation; `text` stands in for the contents of --file when
/// given (the acceptance suite uses this to stay in-process).
inline int run(const Invocation& inv, std::ostream& out, std::ostream& err,
               const std::optional<std::string>& text = std::nullopt) {
  try {
    auto cfg = make_config(inv);
    if (inv.command == "verify-laws") {
      auto r = verify_laws_cmd(cfg);
      render(out, r, inv.json);
      return r.status;
    }
    SpecDocument doc;
    if (text)
      doc = load_document(*text);
    else if (inv.file)
      doc = load_document(read_file(*inv.file));
    else
      throw ValidationError("command '" + inv.command + "' needs --file");
    auto r = dispatch(inv, doc, cfg);
    render(out, r, inv.json);
    return r.status;
  } catch (const ParseError& e) {
    err << "error: " << (inv.file ? *inv.file + ":" : std::string()) << e.what() << '\n';
    return InputError;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << '\n';
    return ResourceCap;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return InputError;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return InputError;
  }
}

}  // namespace blendkit::cli
