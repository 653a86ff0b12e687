#pragma once

// Lax cocones over spans of partial morphisms, model amalgamation along
// them, amalgamation squares of total morphisms, and diagram consistency.
//
// Construction of the cocone over φ1 : Σ0 ⇀ Σ1, φ2 : Σ0 ⇀ Σ2 for a chosen
// dom φ1, dom φ2 ⊆ dom θ0 ⊆ Σ0:
//
//   stage 1 (k = 1, 2):  pushout of (φk⁰, dom φk ⊆ dom θ0)
//                        with legs uk : Σk → Σ'k and vk : dom θ0 → Σ'k
//   stage 2:             pushout of (v1, v2) with legs wk : Σ'k → Σ
//
//   θk = [uk ; wk],   θ0 = (dom θ0 ⊆ Σ0, v1 ; w1).
//
// With dom θ0 = Σ0 this is the lax Sign-pushout; the stage-1 legs are then
// usually called χk (from Σk) and αk (from Σ0), and wk is βk.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "blendkit/config.hpp"
#include "blendkit/error.hpp"
#include "blendkit/inclusion.hpp"
#include "blendkit/partial.hpp"
#include "blendkit/pl.hpp"
#include "blendkit/three_halves.hpp"

namespace blendkit {

template <class Morphism>
struct Span {
  PartialMorphism<Morphism> left;
  PartialMorphism<Morphism> right;

  friend bool operator==(const Span&, const Span&) = default;
};

template <class Morphism>
struct LaxCocone {
  Span<Morphism> span;
  PartialMorphism<Morphism> theta0;
  PartialMorphism<Morphism> theta1;
  PartialMorphism<Morphism> theta2;
  /// stage1[k]: span (φk⁰, dom φk ⊆ dom θ0), legs (uk, vk).
  std::array<Cocone<Morphism>, 2> stage1;
  /// span (v1, v2), legs (w1, w2).
  Cocone<Morphism> stage2;
  /// leq(φk ; θk, θ0), re-verified when the cocone is built.
  std::array<bool, 2> witnesses{};
  /// φk ; θk = θ0.
  std::array<bool, 2> strict{};

  friend bool operator==(const LaxCocone&, const LaxCocone&) = default;
};

template <InclusionSystem C>
using PartialSpan = Span<typename C::Morphism>;

template <InclusionSystem C>
using PartialCocone = LaxCocone<typename C::Morphism>;

/// Least admissible dom θ0: the join of the two definition domains in Σ0.
template <InclusionSystem C>
typename C::Object minimal_dom_theta0(const C& c, const PartialSpan<C>& span) {
  return c.join(dom(c, span.left), dom(c, span.right), psource(c, span.left));
}

template <InclusionSystem C>
bool verify_witnesses(const C& c, const PartialCocone<C>& k) {
  return leq(c, compose(c, k.span.left, k.theta1), k.theta0) && leq(c, compose(c, k.span.right, k.theta2), k.theta0);
}

/// The lax cocone of the header comment. `dom_theta0` defaults to Σ0 and must
/// satisfy dom φ1, dom φ2 ⊆ dom θ0 ⊆ Σ0.
template <InclusionSystem C>
PartialCocone<C> lax_cocone_with_amalgamation(const C& c, const PartialSpan<C>& span,
                                              const std::optional<typename C::Object>& dom_theta0 = std::nullopt) {
  const auto& sigma0 = psource(c, span.left);
  if (!(sigma0 == psource(c, span.right))) throw ContractError("span legs have different sources");
  validate(c, span.left);
  validate(c, span.right);
  const typename C::Object d = dom_theta0 ? *dom_theta0 : sigma0;
  auto d_incl = c.inclusion(d, sigma0);
  if (!d_incl) throw ContractError("dom theta0 is not a sub-object of the span's source");

  PartialCocone<C> k{span, {}, {}, {}, {}, {}, {}, {}};
  const std::array<const Partial<C>*, 2> legs{&span.left, &span.right};
  for (std::size_t i = 0; i < 2; ++i) {
    auto into_d = c.inclusion(dom(c, *legs[i]), d);
    if (!into_d)
      throw ContractError(std::string("dom theta0 does not contain the definition domain of the ") +
                          (i == 0 ? "left" : "right") + " span leg");
    k.stage1[i] = pushout(c, legs[i]->total, *into_d);
  }
  k.stage2 = pushout(c, k.stage1[0].right_leg, k.stage1[1].right_leg);
  k.theta1 = embed(c, c.compose(k.stage1[0].left_leg, k.stage2.left_leg));
  k.theta2 = embed(c, c.compose(k.stage1[1].left_leg, k.stage2.right_leg));
  k.theta0 = Partial<C>{*d_incl, c.compose(k.stage1[0].right_leg, k.stage2.left_leg)};
  k.witnesses = {leq(c, compose(c, span.left, k.theta1), k.theta0), leq(c, compose(c, span.right, k.theta2), k.theta0)};
  k.strict = {compose(c, span.left, k.theta1) == k.theta0, compose(c, span.right, k.theta2) == k.theta0};
  return k;
}

/// Lax Sign-pushout: the construction with dom θ0 = Σ0, all legs total.
template <InclusionSystem C>
PartialCocone<C> lax_sign_pushout(const C& c, const PartialSpan<C>& span) {
  return lax_cocone_with_amalgamation(c, span, std::optional<typename C::Object>(psource(c, span.left)));
}

template <InclusionSystem C>
const typename C::Object& apex(const C& c, const PartialCocone<C>& k) {
  return ptarget(c, k.theta1);
}

// ---------------------------------------------------------------------------
// Models

/// M ∈ pMod(φ)M'.
template <BaseInstitution I>
bool in_reduct(const I& inst, const Partial<I>& phi, const typename I::Model& source_model,
               const typename I::Model& target_model) {
  return inst.reduct(phi.witness, source_model) == inst.reduct(phi.total, target_model);
}

/// (M0, M1, M2, M) is a model of the whole cocone diagram.
template <BaseInstitution I>
bool is_cocone_model(const I& inst, const PartialCocone<I>& k, const typename I::Model& m0,
                     const typename I::Model& m1, const typename I::Model& m2, const typename I::Model& m) {
  return in_reduct(inst, k.span.left, m0, m1) && in_reduct(inst, k.span.right, m0, m2) &&
         in_reduct(inst, k.theta1, m1, m) && in_reduct(inst, k.theta2, m2, m) && in_reduct(inst, k.theta0, m0, m);
}

template <BaseInstitution I>
struct Amalgamation {
  typename I::Model model;
  /// Apex models completing (M0, M1, M2), when counted.
  std::optional<std::size_t> completions;
  std::optional<int> carrier_bound;

  bool unique() const { return completions && *completions == 1; }
};

/// Stepwise amalgamation along the cocone: N0 = M0 restricted to dom θ0,
/// M'k = amalgam of Mk and N0 over stage 1, M = amalgam of M'1 and M'2.
/// With `count_completions` every apex model is tested as well.
template <BaseInstitution I>
Amalgamation<I> amalgamate(const I& inst, const PartialCocone<I>& k, const typename I::Model& m0,
                           const typename I::Model& m1, const typename I::Model& m2, const Bounds& b = {},
                           bool count_completions = true) {
  if (!in_reduct(inst, k.span.left, m0, m1))
    throw ContractError("M0 is not in the reduct set of M1 along the left span edge");
  if (!in_reduct(inst, k.span.right, m0, m2))
    throw ContractError("M0 is not in the reduct set of M2 along the right span edge");
  auto n0 = inst.reduct(k.theta0.witness, m0);
  auto left = inst.amalgamate(k.stage1[0], m1, n0);
  auto right = inst.amalgamate(k.stage1[1], m2, n0);
  if (!left || !right) throw ContractError("stage-one cocone does not amalgamate the given models");
  auto m = inst.amalgamate(k.stage2, *left, *right);
  if (!m) throw ContractError("stage-two cocone does not amalgamate the given models");
  if (!is_cocone_model(inst, k, m0, m1, m2, *m)) throw ContractError("amalgamated model fails the cocone diagram");
  Amalgamation<I> out{std::move(*m), std::nullopt, semantic_bound(inst, b)};
  if (count_completions) {
    std::size_t n = 0;
    for (const auto& cand : inst.enumerate_models(apex(inst, k), b))
      if (in_reduct(inst, k.theta1, m1, cand) && in_reduct(inst, k.theta2, m2, cand) &&
          in_reduct(inst, k.theta0, m0, cand))
        ++n;
    out.completions = n;
  }
  return out;
}

enum class AmalgamationVerdict { Amalgamation, Weak, Neither };

inline std::string to_string(AmalgamationVerdict v) {
  switch (v) {
    case AmalgamationVerdict::Amalgamation:
      return "amalgamation";
    case AmalgamationVerdict::Weak:
      return "weak";
    case AmalgamationVerdict::Neither:
      return "neither";
  }
  return "";
}

template <BaseInstitution I>
struct SquareReport {
  AmalgamationVerdict verdict = AmalgamationVerdict::Amalgamation;
  std::size_t span_models = 0;
  /// A span model with a completion count other than 1 (the first
  /// without completions when the verdict is neither).
  std::optional<std::pair<typename I::Model, typename I::Model>> witness;
  std::size_t witness_completions = 0;
  std::optional<int> carrier_bound;
};

/// Counts, for every compatible (M1, M2), the apex models M with
/// M|g1 = M1 and M|g2 = M2.
template <BaseInstitution I>
SquareReport<I> check_amalgamation_square(const I& inst, const Cocone<typename I::Morphism>& sq, const Bounds& b = {}) {
  if (!cocone_commutes(inst, sq)) throw ContractError("amalgamation square does not commute");
  using Model = typename I::Model;
  std::map<std::pair<Model, Model>, std::size_t> counts;
  for (const auto& m : inst.enumerate_models(inst.target(sq.left_leg), b))
    ++counts[{inst.reduct(sq.left_leg, m), inst.reduct(sq.right_leg, m)}];
  std::map<Model, std::vector<Model>> right_by_base;
  for (auto& m2 : inst.enumerate_models(inst.target(sq.right_span), b))
    right_by_base[inst.reduct(sq.right_span, m2)].push_back(std::move(m2));

  SquareReport<I> r;
  r.carrier_bound = semantic_bound(inst, b);
  for (const auto& m1 : inst.enumerate_models(inst.target(sq.left_span), b)) {
    auto it = right_by_base.find(inst.reduct(sq.left_span, m1));
    if (it == right_by_base.end()) continue;
    for (const auto& m2 : it->second) {
      ++r.span_models;
      auto c = counts.find({m1, m2});
      std::size_t n = c == counts.end() ? 0 : c->second;
      if (n == 1) continue;
      if (n == 0 && r.verdict != AmalgamationVerdict::Neither) {
        r.verdict = AmalgamationVerdict::Neither;
        r.witness = {m1, m2};
        r.witness_completions = 0;
      } else if (n > 1 && r.verdict == AmalgamationVerdict::Amalgamation) {
        r.verdict = AmalgamationVerdict::Weak;
        r.witness = {m1, m2};
        r.witness_completions = n;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Diagrams

/// Finite diagram of theories and partial morphisms. A model assigns each
/// node a model of its theory such that Mi ∈ pMod(φ)Mj for every edge
/// φ : i ⇀ j.
template <BaseInstitution I>
struct Diagram {
  struct Node {
    std::string name;
    Theory<I> theory;
  };
  struct Edge {
    std::string name;
    std::size_t from;
    std::size_t to;
    Partial<I> morphism;
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

template <BaseInstitution I>
void validate(const I& inst, const Diagram<I>& d) {
  for (const auto& e : d.edges) {
    if (e.from >= d.nodes.size() || e.to >= d.nodes.size()) throw ValidationError("edge '" + e.name + "' has a dangling end");
    validate(inst, e.morphism);
    if (!(psource(inst, e.morphism) == d.nodes[e.from].theory.signature) ||
        !(ptarget(inst, e.morphism) == d.nodes[e.to].theory.signature))
      throw ValidationError("edge '" + e.name + "' does not connect its nodes' signatures");
  }
}

/// Backtracking search for a diagram model; nodes are assigned in order and
/// every edge is checked once both of its ends are assigned.
template <BaseInstitution I>
std::optional<std::vector<typename I::Model>> find_diagram_model(const I& inst, const Diagram<I>& d,
                                                                 const Bounds& b = {}) {
  validate(inst, d);
  using Model = typename I::Model;
  std::vector<std::vector<Model>> candidates;
  for (const auto& n : d.nodes) {
    candidates.push_back(models_of(inst, n.theory, b));
  }
  std::vector<std::vector<const typename Diagram<I>::Edge*>> closing(d.nodes.size());
  for (const auto& e : d.edges) closing[std::max(e.from, e.to)].push_back(&e);

  std::vector<Model> chosen;
  chosen.reserve(d.nodes.size());
  auto search = [&](auto&& self, std::size_t i) -> bool {
    if (i == d.nodes.size()) return true;
    for (const auto& m : candidates[i]) {
      chosen.push_back(m);
      bool ok = true;
      for (const auto* e : closing[i])
        if (!in_reduct(inst, e->morphism, chosen[e->from], chosen[e->to])) {
          ok = false;
          break;
        }
      if (ok && self(self, i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return chosen;
}

template <BaseInstitution I>
bool is_consistent(const I& inst, const Diagram<I>& d, const Bounds& b = {}) {
  return find_diagram_model(inst, d, b).has_value();
}

// ---------------------------------------------------------------------------
// Universality of the lax Sign-pushout (PL)

struct UniversalityReport {
  std::size_t competitors = 0;
  std::size_t failures = 0;
  std::size_t apex_bound = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

namespace detail {

/// Index form of a PL morphism between sorted symbol lists.
inline std::vector<int> index_map(const pl::Morphism& m) {
  std::vector<int> out;
  for (const auto& s : m.source.symbols) out.push_back(static_cast<int>(m.target.index_of(m(s))));
  return out;
}

}  // namespace detail

/// Every lax cocone with total legs θ'0, θ'1, θ'2 into apexes {c1..cn},
/// n ≤ apex_bound, must factor through `k` by exactly one total μ with
/// θk ; μ = θ'k. The mediator count is computed exactly: each apex symbol of
/// `k` hit by a leg has its image forced, each symbol hit by none is free.
inline UniversalityReport verify_lax_T_pushout(const pl::Sets& c, const LaxCocone<pl::Morphism>& k,
                                               std::size_t apex_bound = 3) {
  if (!is_total_morphism(c, k.theta0)) throw ContractError("lax T-pushout check needs a total theta0");
  UniversalityReport r;
  r.apex_bound = apex_bound;
  const auto& s0 = psource(c, k.span.left);
  const auto& s1 = ptarget(c, k.span.left);
  const auto& s2 = ptarget(c, k.span.right);
  const auto& top = ptarget(c, k.theta0);
  const auto th0 = detail::index_map(k.theta0.total);
  const auto th1 = detail::index_map(k.theta1.total);
  const auto th2 = detail::index_map(k.theta2.total);
  // φk as (Σ0 index, Σk index) pairs over dom φk
  auto pairs = [&](const PartialMorphism<pl::Morphism>& phi, const pl::Signature& tgt) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [x, y] : phi.total.map)
      out.emplace_back(static_cast<int>(s0.index_of(x)), static_cast<int>(tgt.index_of(y)));
    return out;
  };
  const auto p1 = pairs(k.span.left, s1);
  const auto p2 = pairs(k.span.right, s2);
  const int n0 = static_cast<int>(s0.size()), n1 = static_cast<int>(s1.size()), n2 = static_cast<int>(s2.size());
  const int na = static_cast<int>(top.size());

  // constrain med[a] := v; -2 marks a conflict
  auto force = [](std::vector<int>& med, const std::vector<int>& theta, const std::vector<int>& leg) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      int& slot = med[static_cast<std::size_t>(theta[i])];
      if (slot == -2) continue;
      if (slot == -1)
        slot = leg[i];
      else if (slot != leg[i])
        slot = -2;
    }
  };
  // all functions n_src -> n, with positions in `fixed` pinned
  auto functions = [](int n_src, int n, const std::vector<int>& pinned) {
    std::vector<std::vector<int>> out;
    std::vector<int> f(static_cast<std::size_t>(n_src), 0);
    std::vector<int> free_pos;
    for (int i = 0; i < n_src; ++i) {
      if (pinned[static_cast<std::size_t>(i)] >= 0)
        f[static_cast<std::size_t>(i)] = pinned[static_cast<std::size_t>(i)];
      else
        free_pos.push_back(i);
    }
    if (n == 0 && !free_pos.empty()) return out;
    while (true) {
      out.push_back(f);
      std::size_t pos = free_pos.size();
      bool done = free_pos.empty();
      while (pos > 0) {
        --pos;
        int& digit = f[static_cast<std::size_t>(free_pos[pos])];
        if (++digit < n) break;
        digit = 0;
        if (pos == 0) done = true;
      }
      if (done) return out;
    }
  };
  auto describe = [&](int n, const std::vector<int>& t0, const std::vector<int>& t1, const std::vector<int>& t2,
                      std::uint64_t count) {
    std::ostringstream os;
    auto dump = [&](const std::vector<int>& t) {
      os << '[';
      for (std::size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << 'c' << t[i] + 1;
      os << ']';
    };
    os << "apex size " << n << ", theta'0 ";
    dump(t0);
    os << ", theta'1 ";
    dump(t1);
    os << ", theta'2 ";
    dump(t2);
    os << ": " << count << " mediators";
    return os.str();
  };

  for (int n = 0; n <= static_cast<int>(apex_bound); ++n) {
    for (const auto& t0 : functions(n0, n, std::vector<int>(static_cast<std::size_t>(n0), -1))) {
      std::vector<int> pin1(static_cast<std::size_t>(n1), -1), pin2(static_cast<std::size_t>(n2), -1);
      bool clash = false;
      for (auto [x, y] : p1) {
        int& slot = pin1[static_cast<std::size_t>(y)];
        if (slot >= 0 && slot != t0[static_cast<std::size_t>(x)]) clash = true;
        slot = t0[static_cast<std::size_t>(x)];
      }
      for (auto [x, y] : p2) {
        int& slot = pin2[static_cast<std::size_t>(y)];
        if (slot >= 0 && slot != t0[static_cast<std::size_t>(x)]) clash = true;
        slot = t0[static_cast<std::size_t>(x)];
      }
      if (clash) continue;
      std::vector<int> med0(static_cast<std::size_t>(na), -1);
      force(med0, th0, t0);
      auto f2s = functions(n2, n, pin2);
      for (const auto& t1 : functions(n1, n, pin1)) {
        std::vector<int> med1 = med0;
        force(med1, th1, t1);
        for (const auto& t2 : f2s) {
          std::vector<int> med = med1;
          force(med, th2, t2);
          ++r.competitors;
          std::uint64_t count = 1;
          for (int v : med) {
            if (v == -2) {
              count = 0;
              break;
            }
            if (v == -1) count *= static_cast<std::uint64_t>(n);
          }
          if (count != 1) {
            if (r.failures == 0) r.first_failure = describe(n, t0, t1, t2, count);
            ++r.failures;
          }
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Graph output

/// dot-format text of the span, the cocone legs and the construction trace.
template <InclusionSystem C>
std::string to_dot(const C& c, const PartialCocone<C>& k, const std::string& graph_name = "blend") {
  std::ostringstream os;
  auto label = [](const auto& obj) {
    std::ostringstream l;
    l << obj;
    std::string s = l.str(), out;
    for (char ch : s) {
      if (ch == '"' || ch == '\\') out += '\\';
      out += ch;
    }
    return out;
  };
  os << "digraph " << graph_name << " {\n  rankdir=BT;\n";
  os << "  S0 [label=\"Sigma0 " << label(psource(c, k.span.left)) << "\"];\n";
  os << "  S1 [label=\"Sigma1 " << label(ptarget(c, k.span.left)) << "\"];\n";
  os << "  S2 [label=\"Sigma2 " << label(ptarget(c, k.span.right)) << "\"];\n";
  os << "  D0 [label=\"dom theta0 " << label(dom(c, k.theta0)) << "\", shape=box];\n";
  os << "  P1 [label=\"Sigma'1 " << label(c.target(k.stage1[0].left_leg)) << "\", shape=box];\n";
  os << "  P2 [label=\"Sigma'2 " << label(c.target(k.stage1[1].left_leg)) << "\", shape=box];\n";
  os << "  S [label=\"Sigma " << label(apex(c, k)) << "\", peripheries=2];\n";
  os << "  S0 -> S1 [label=\"phi1\", style=dashed];\n";
  os << "  S0 -> S2 [label=\"phi2\", style=dashed];\n";
  os << "  D0 -> S0 [label=\"incl\", arrowhead=empty];\n";
  os << "  S1 -> P1 [label=\"u1\"];\n  D0 -> P1 [label=\"v1\"];\n";
  os << "  S2 -> P2 [label=\"u2\"];\n  D0 -> P2 [label=\"v2\"];\n";
  os << "  P1 -> S [label=\"w1\"];\n  P2 -> S [label=\"w2\"];\n";
  os << "  S1 -> S [label=\"theta1\", color=blue];\n  S2 -> S [label=\"theta2\", color=blue];\n";
  os << "  S0 -> S [label=\"theta0\", color=blue, style=dashed];\n";
  os << "}\n";
  return os.str();
}

}  // namespace blendkit
