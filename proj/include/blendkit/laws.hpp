#pragma once

// Executable laws. Each check returns an empty string when the law holds on
// the given data and a short description of the violation otherwise. The
// oracles here never call the operation they test for the answer: they
// enumerate candidates and compare.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blendkit/blend.hpp"
#include "blendkit/config.hpp"
#include "blendkit/msa.hpp"
#include "blendkit/partial.hpp"
#include "blendkit/pl.hpp"
#include "blendkit/random.hpp"
#include "blendkit/three_halves.hpp"

namespace blendkit {

struct LawResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string first_violation;

  bool ok() const { return violations == 0; }
  /// Record one instance; `problem` empty means it passed.
  void record(const std::string& problem) {
    ++checked;
    if (problem.empty()) return;
    if (violations++ == 0) first_violation = problem;
  }
};

// ---------------------------------------------------------------------------
// Per-category plumbing for the oracles

inline std::vector<pl::Signature> all_subobjects(const pl::Sets&, const pl::Signature& sig) {
  return pl::subobjects(sig);
}

inline std::vector<msa::Signature> all_subobjects(const msa::Signatures& sys, const msa::Signature& sig) {
  return msa::subobjects(sys, sig);
}

/// f with its target replaced by `x`, when f lands in x.
inline std::optional<pl::Morphism> corestrict(const pl::Sets&, const pl::Morphism& f, const pl::Signature& x) {
  for (const auto& [s, img] : f.map)
    if (!x.contains(img)) return std::nullopt;
  return pl::Morphism{f.source, x, f.map};
}

inline std::optional<msa::Morphism> corestrict(const msa::Signatures&, const msa::Morphism& f,
                                               const msa::Signature& x) {
  for (const auto& [s, img] : f.sorts)
    if (!x.has_sort(img)) return std::nullopt;
  for (const auto& [op, name] : f.ops)
    if (!x.has_op(f.op(op))) return std::nullopt;
  return msa::Morphism{f.source, x, f.sorts, f.ops};
}

template <class T>
std::string describe(const T& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// Inclusion systems

/// factorize(f) is a factorization and the only one: among all sub-objects
/// X of the codomain exactly one admits f = e;i with e surjective.
template <InclusionSystem C>
std::string check_factorization(const C& c, const typename C::Morphism& f) {
  auto fact = c.factorize(f);
  if (!is_factorization_of(c, fact, f)) return "factorize(f) is not an (e, i) factorization of " + describe(f);
  std::size_t found = 0;
  for (const auto& x : all_subobjects(c, c.target(f))) {
    auto e = corestrict(c, f, x);
    if (!e || !c.is_surjection(*e)) continue;
    ++found;
    if (!(x == c.target(fact.surjection))) return "a second factorization goes through " + describe(x);
  }
  if (found != 1) return "factorization of " + describe(f) + " not found among sub-objects";
  return {};
}

/// The semi-inclusive pullback of f along B' ⊆ B: the square commutes and
/// its corner is the greatest sub-object of A that f maps into B', the
/// unique inclusive pullback.
template <InclusionSystem C>
std::string check_pullback(const C& c, const typename C::Morphism& f, const typename C::Morphism& incl) {
  auto sq = semi_inclusive_pullback(c, f, incl);
  if (!square_commutes(c, sq)) return "pullback square does not commute";
  if (!c.is_inclusion(sq.left)) return "pullback left leg is not an inclusion";
  const auto& corner = c.source(sq.left);
  std::size_t maximal = 0;
  for (const auto& x : all_subobjects(c, c.source(f))) {
    auto xi = *c.inclusion(x, c.source(f));
    if (!corestrict(c, c.compose(xi, f), c.source(incl))) continue;
    if (!is_subobject(c, x, corner)) return "commuting sub-object " + describe(x) + " escapes the pullback corner";
    if (x == corner) ++maximal;
  }
  if (maximal != 1) return "pullback corner is not a commuting sub-object";
  return {};
}

/// Surjection stability on one semi-inclusive pullback square.
template <InclusionSystem C>
std::string check_stability(const C& c, const typename C::Morphism& f, const typename C::Morphism& incl) {
  auto sq = semi_inclusive_pullback(c, f, incl);
  if (!check_surjection_stability(c, sq)) return "surjection " + describe(f) + " not stable under pullback";
  return {};
}

// ---------------------------------------------------------------------------
// Partial morphisms

template <InclusionSystem C>
std::string check_associativity(const C& c, const Partial<C>& a, const Partial<C>& b, const Partial<C>& d) {
  auto left = compose(c, compose(c, a, b), d);
  auto right = compose(c, a, compose(c, b, d));
  if (!(left == right)) return "(a;b);c differs from a;(b;c)";
  if (!(compose(c, a, b) == compose_by_pullback(c, a, b))) return "fast-path composition differs from the pullback";
  return {};
}

template <InclusionSystem C>
std::string check_identity_laws(const C& c, const Partial<C>& a) {
  if (!(compose(c, partial_identity(c, psource(c, a)), a) == a)) return "left identity law fails";
  if (!(compose(c, a, partial_identity(c, ptarget(c, a))) == a)) return "right identity law fails";
  return {};
}

/// Order laws for a ≤-chain sample (a, b, d) with common endpoints.
template <InclusionSystem C>
std::string check_order(const C& c, const Partial<C>& a, const Partial<C>& b, const Partial<C>& d) {
  if (!leq(c, a, a)) return "leq is not reflexive";
  if (leq(c, a, b) && leq(c, b, a) && !(a == b)) return "leq is not antisymmetric";
  if (leq(c, a, b) && leq(c, b, d) && !leq(c, a, d)) return "leq is not transitive";
  return {};
}

/// a ≤ b implies pre;a ≤ pre;b and a;post ≤ b;post.
template <InclusionSystem C>
std::string check_monotonicity(const C& c, const Partial<C>& a, const Partial<C>& b, const Partial<C>& pre,
                               const Partial<C>& post) {
  if (!leq(c, a, b)) return {};
  if (!leq(c, compose(c, pre, a), compose(c, pre, b))) return "precomposition is not monotone";
  if (!leq(c, compose(c, a, post), compose(c, b, post))) return "postcomposition is not monotone";
  return {};
}

/// factorize_partial(φ) is a factorization in pSign and the only one
/// through an embedded inclusion.
template <InclusionSystem C>
std::string check_partial_factorization(const C& c, const Partial<C>& phi) {
  auto fact = factorize_partial(c, phi);
  if (!is_psign_surjection(c, fact.surjection) || !is_psign_inclusion(c, fact.inclusion) ||
      !(compose(c, fact.surjection, fact.inclusion) == phi))
    return "factorize_partial does not factor " + describe(phi);
  std::size_t found = 0;
  for (const auto& x : all_subobjects(c, ptarget(c, phi))) {
    auto e0 = corestrict(c, phi.total, x);
    if (!e0) continue;
    Partial<C> e{phi.witness, *e0};
    auto i = embed(c, *c.inclusion(x, ptarget(c, phi)));
    if (!is_psign_surjection(c, e) || !(compose(c, e, i) == phi)) continue;
    ++found;
    if (!(e == fact.surjection) || !(i == fact.inclusion)) return "a second partial factorization exists";
  }
  if (found != 1) return "partial factorization not found among sub-objects";
  return {};
}

// ---------------------------------------------------------------------------
// The 3/2-institution

template <BaseInstitution I>
std::string check_satisfaction_condition(const I& inst, const Partial<I>& phi, const typename I::Model& m2,
                                         const typename I::Sentence& rho, const Bounds& b) {
  if (!psen_translate(inst, phi, rho)) return {};
  auto r = check_satisfaction(inst, phi, m2, rho, b);
  if (!r.ok()) return "satisfaction condition fails for " + describe(phi);
  return {};
}

/// pSen(a;d)ρ = pSen(d)(pSen(a)ρ), both sides defined on the same sentences.
template <BaseInstitution I>
std::string check_psen_strict(const I& inst, const Partial<I>& a, const Partial<I>& d,
                              const typename I::Sentence& rho) {
  auto direct = psen_translate(inst, compose(inst, a, d), rho);
  auto first = psen_translate(inst, a, rho);
  std::optional<typename I::Sentence> stepwise;
  if (first) stepwise = psen_translate(inst, d, *first);
  if (direct.has_value() != stepwise.has_value()) return "pSen composite and stepwise translation differ in definedness";
  if (direct && !(*direct == *stepwise)) return "pSen composite and stepwise translation differ";
  return {};
}

/// Lax pMod: M ∈ pMod(1)M, pMod(d)M'';pMod(a) ⊆ pMod(a;d)M'', and the
/// reduct sets along a restriction of `a` contain those along `a`.
template <BaseInstitution I>
std::string check_pmod_lax(const I& inst, const Partial<I>& a, const Partial<I>& d, const Partial<I>& smaller,
                           const typename I::Model& m2, const Bounds& b) {
  auto id = partial_identity(inst, ptarget(inst, d));
  auto self = pmod_reduct(inst, id, m2, b).models;
  if (self.size() != 1 || !(self.front() == m2)) return "pMod(1) is not the identity";
  auto stepwise = pmod_image(inst, a, pmod_reduct(inst, d, m2, b).models, b);
  auto direct = detail::sorted_unique(pmod_reduct(inst, compose(inst, a, d), m2, b).models);
  if (!std::includes(direct.begin(), direct.end(), stepwise.begin(), stepwise.end()))
    return "pMod(d);pMod(a) escapes pMod(a;d)";
  if (leq(inst, smaller, a)) {
    for (const auto& m1 : pmod_reduct(inst, d, m2, b).models) {
      auto big = detail::sorted_unique(pmod_reduct(inst, a, m1, b).models);
      auto small = detail::sorted_unique(pmod_reduct(inst, smaller, m1, b).models);
      if (!std::includes(small.begin(), small.end(), big.begin(), big.end())) return "pMod is not antitone in the order";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// A quick randomized sweep over PL and the three MSA systems

namespace detail {

inline pl::Signature pl_sig(Rng& rng, int max, const std::string& prefix) {
  return pl::random_signature(rng, 1, max, prefix);
}

}  // namespace detail

/// Random instances of every law above; `iterations` per law and base.
inline std::vector<LawResult> run_law_suite(const RunConfig& cfg) {
  std::vector<LawResult> out;
  Rng rng(cfg.seed);
  const Bounds& b = cfg.bounds;
  const std::size_t n = cfg.iterations;
  pl::Institution pli;

  {
    LawResult r{"pl.factorization", 0, 0, {}};
    for (std::size_t i = 0; i < n; ++i) {
      auto a = detail::pl_sig(rng, 5, "a");
      auto f = pl::random_morphism(rng, a, detail::pl_sig(rng, 5, "b"));
      r.record(check_factorization(pli, f));
    }
    out.push_back(r);
  }
  {
    LawResult r{"pl.pullback", 0, 0, {}}, s{"pl.surjection-stability", 0, 0, {}};
    for (std::size_t i = 0; i < n; ++i) {
      auto bsig = detail::pl_sig(rng, 4, "b");
      auto f = pl::random_morphism(rng, detail::pl_sig(rng, 4, "a"), bsig);
      if (rng.chance(1, 2)) f = pli.factorize(f).surjection;
      auto incl = *pli.inclusion(pl::random_subset(rng, pli.target(f)), pli.target(f));
      r.record(check_pullback(pli, f, incl));
      s.record(check_stability(pli, f, incl));
    }
    out.push_back(r);
    out.push_back(s);
  }
  {
    LawResult assoc{"pl.associativity", 0, 0, {}}, ident{"pl.identity", 0, 0, {}}, order{"pl.order", 0, 0, {}},
        mono{"pl.monotonicity", 0, 0, {}}, fact{"pl.partial-factorization", 0, 0, {}};
    for (std::size_t i = 0; i < n; ++i) {
      auto s0 = detail::pl_sig(rng, 3, "a"), s1 = detail::pl_sig(rng, 3, "b"), s2 = detail::pl_sig(rng, 3, "c"),
           s3 = detail::pl_sig(rng, 3, "d");
      auto a = pl::random_partial(rng, s0, s1), c = pl::random_partial(rng, s1, s2), d = pl::random_partial(rng, s2, s3);
      assoc.record(check_associativity(pli, a, c, d));
      ident.record(check_identity_laws(pli, a));
      auto smaller = restrict_to(pli, a, pl::random_subset(rng, dom(pli, a)));
      auto smallest = restrict_to(pli, smaller, pl::random_subset(rng, dom(pli, smaller)));
      order.record(check_order(pli, smallest, smaller, a));
      auto pre = pl::random_partial(rng, detail::pl_sig(rng, 3, "z"), s0);
      mono.record(check_monotonicity(pli, smaller, a, pre, c));
      fact.record(check_partial_factorization(pli, a));
    }
    for (auto* r : {&assoc, &ident, &order, &mono, &fact}) out.push_back(*r);
  }
  {
    LawResult sat{"pl.satisfaction", 0, 0, {}}, psen{"pl.psen-strict", 0, 0, {}}, pmod{"pl.pmod-lax", 0, 0, {}};
    for (std::size_t i = 0; i < n; ++i) {
      auto s0 = detail::pl_sig(rng, 3, "a"), s1 = detail::pl_sig(rng, 3, "b"), s2 = detail::pl_sig(rng, 3, "c");
      auto a = pl::random_partial(rng, s0, s1), d = pl::random_partial(rng, s1, s2);
      auto rho = pl::random_sentence(rng, s0, 3);
      sat.record(check_satisfaction_condition(pli, a, pl::random_model(rng, s1), rho, b));
      psen.record(check_psen_strict(pli, a, d, rho));
      auto smaller = restrict_to(pli, a, pl::random_subset(rng, dom(pli, a)));
      pmod.record(check_pmod_lax(pli, a, d, smaller, pl::random_model(rng, s2), b));
    }
    for (auto* r : {&sat, &psen, &pmod}) out.push_back(*r);
  }
  {
    LawResult amal{"pl.amalgamation", 0, 0, {}};
    for (std::size_t i = 0; i < n; ++i) {
      auto s0 = detail::pl_sig(rng, 3, "a");
      Span<pl::Morphism> span{pl::random_partial(rng, s0, detail::pl_sig(rng, 3, "b")),
                              pl::random_partial(rng, s0, detail::pl_sig(rng, 3, "c"))};
      auto k = lax_sign_pushout(pli, span);
      auto m1 = pl::random_model(rng, ptarget(pli, span.left));
      auto m2 = pl::random_model(rng, ptarget(pli, span.right));
      std::string problem;
      for (const auto& m0 : pli.enumerate_models(s0, b)) {
        if (!in_reduct(pli, span.left, m0, m1) || !in_reduct(pli, span.right, m0, m2)) continue;
        if (!amalgamate(pli, k, m0, m1, m2, b).unique()) problem = "amalgamation is not unique";
      }
      amal.record(problem);
    }
    out.push_back(amal);
  }

  // MSA, one block per inclusion system; semantics at the configured bound
  Bounds mb = b;
  mb.max_carrier = std::min(b.max_carrier, 2);
  for (auto kind : {msa::InclusionKind::Closed, msa::InclusionKind::Strong, msa::InclusionKind::NearlyStrong}) {
    msa::Institution mi(kind);
    const std::string p = "msa-" + msa::to_string(kind) + ".";
    LawResult fact{p + "factorization", 0, 0, {}}, pb{p + "pullback", 0, 0, {}}, stab{p + "surjection-stability", 0, 0, {}},
        assoc{p + "associativity", 0, 0, {}}, pfact{p + "partial-factorization", 0, 0, {}},
        sat{p + "satisfaction", 0, 0, {}}, psen{p + "psen-strict", 0, 0, {}};
    for (std::size_t i = 0; i < n; ++i) {
      auto s0 = msa::random_signature(rng, 1, 2, 3, 2, "s");
      auto f = msa::random_morphism_from(rng, s0, "t");
      fact.record(check_factorization(mi, f));
      auto sub = msa::random_subobject(rng, mi, mi.target(f));
      auto incl = *mi.inclusion(sub, mi.target(f));
      pb.record(check_pullback(mi, f, incl));
      auto e = mi.factorize(f).surjection;
      stab.record(check_stability(mi, e, *mi.inclusion(msa::random_subobject(rng, mi, e.target), e.target)));
      auto a = msa::random_partial_from(rng, mi, s0, "t");
      auto c = msa::random_partial_from(rng, mi, ptarget(mi, a), "u");
      auto d = msa::random_partial_from(rng, mi, ptarget(mi, c), "v");
      assoc.record(check_associativity(mi, a, c, d));
      pfact.record(check_partial_factorization(mi, a));
      if (!s0.sorts.empty()) {
        auto rho = msa::random_sentence(rng, s0, 2, 1);
        auto m1 = msa::random_algebra(rng, ptarget(mi, a), mb.max_carrier);
        sat.record(check_satisfaction_condition(mi, a, m1, rho, mb));
        psen.record(check_psen_strict(mi, a, c, rho));
      }
    }
    for (auto* r : {&fact, &pb, &stab, &assoc, &pfact, &sat, &psen}) out.push_back(*r);
  }
  return out;
}

}  // namespace blendkit
