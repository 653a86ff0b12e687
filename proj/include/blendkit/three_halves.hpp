#pragma once

// The 3/2-institution generated by a base institution with an inclusion
// system: partial signature morphisms, partial sentence translation (defined
// exactly on Sen(dom φ)) and set-valued model reducts
//
//   pMod(φ)M' = { M | M restricted to dom φ = Mod(φ⁰)M' }.

#include <algorithm>
#include <concepts>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blendkit/config.hpp"
#include "blendkit/error.hpp"
#include "blendkit/inclusion.hpp"
#include "blendkit/partial.hpp"
#include "blendkit/pl.hpp"

namespace blendkit {

// clang-format off
template <class I>
concept BaseInstitution = InclusionSystem<I> &&
    requires(const I& inst,
             const typename I::Object& sig,
             const typename I::Morphism& m,
             const typename I::Sentence& s,
             const typename I::Model& model,
             const Cocone<typename I::Morphism>& k,
             const Bounds& b) {
  { inst.translate(m, s) } -> std::same_as<typename I::Sentence>;
  { inst.reduct(m, model) } -> std::same_as<typename I::Model>;
  { inst.satisfies(model, s) } -> std::same_as<bool>;
  { inst.sentence_over(sig, s) } -> std::same_as<bool>;
  { inst.enumerate_models(sig, b) } -> std::same_as<std::vector<typename I::Model>>;
  { inst.extensions(sig, model, b) } -> std::same_as<std::vector<typename I::Model>>;
  { inst.signature_of(model) } -> std::convertible_to<typename I::Object>;
  { inst.has_no_sentences(sig) } -> std::same_as<bool>;
  { inst.exact_semantics() } -> std::same_as<bool>;
  { inst.amalgamate(k, model, model) } -> std::same_as<std::optional<typename I::Model>>;
  { inst.logic() } -> std::convertible_to<std::string>;
};
// clang-format on

/// A presentation (Σ, E); its closure E• is never materialized.
template <BaseInstitution I>
struct Theory {
  typename I::Object signature;
  std::vector<typename I::Sentence> axioms;

  friend bool operator==(const Theory&, const Theory&) = default;
};

template <BaseInstitution I>
bool satisfies_all_axioms(const I& inst, const typename I::Model& m, const Theory<I>& t) {
  for (const auto& e : t.axioms)
    if (!inst.satisfies(m, e)) return false;
  return true;
}

template <BaseInstitution I>
std::vector<typename I::Model> models_of(const I& inst, const Theory<I>& t, const Bounds& b = {}) {
  std::vector<typename I::Model> out;
  for (auto& m : inst.enumerate_models(t.signature, b))
    if (satisfies_all_axioms(inst, m, t)) out.push_back(std::move(m));
  return out;
}

/// Carrier bound attached to semantic verdicts; empty for exact (PL) ones.
template <BaseInstitution I>
std::optional<int> semantic_bound(const I& inst, const Bounds& b) {
  if (inst.exact_semantics()) return std::nullopt;
  return b.max_carrier;
}

template <BaseInstitution I>
struct ReductSet {
  std::vector<typename I::Model> models;
  PartialMorphism<typename I::Morphism> phi;
  typename I::Model target_model;
  std::optional<int> carrier_bound;
};

/// pSen(φ)ρ: defined iff ρ only uses dom φ.
template <BaseInstitution I>
std::optional<typename I::Sentence> psen_translate(const I& inst, const Partial<I>& phi, const typename I::Sentence& rho) {
  if (!inst.sentence_over(psource(inst, phi), rho))
    throw ValidationError("sentence is not over the source signature of the partial morphism");
  if (!inst.sentence_over(dom(inst, phi), rho)) return std::nullopt;
  return inst.translate(phi.total, rho);
}

/// Every source model whose dom φ part is the φ⁰-reduct of M'.
template <BaseInstitution I>
ReductSet<I> pmod_reduct(const I& inst, const Partial<I>& phi, const typename I::Model& target_model,
                         const Bounds& b = {}) {
  if (!(inst.signature_of(target_model) == ptarget(inst, phi)))
    throw ContractError("reduct of a model over the wrong signature");
  auto base = inst.reduct(phi.total, target_model);
  return {inst.extensions(psource(inst, phi), base, b), phi, target_model, semantic_bound(inst, b)};
}

/// Definition-level reduct set: filter every source model by the defining
/// equation. Used to cross-check pmod_reduct.
template <BaseInstitution I>
std::vector<typename I::Model> pmod_reduct_by_filter(const I& inst, const Partial<I>& phi,
                                                     const typename I::Model& target_model, const Bounds& b = {}) {
  auto base = inst.reduct(phi.total, target_model);
  std::vector<typename I::Model> out;
  for (auto& m : inst.enumerate_models(psource(inst, phi), b))
    if (inst.reduct(phi.witness, m) == base) out.push_back(std::move(m));
  return out;
}

template <BaseInstitution I>
struct SatisfactionReport {
  typename I::Sentence translated;
  bool target_holds = false;
  std::vector<typename I::Model> reducts;
  /// Reducts whose verdict on ρ differs from M' ⊨ pSen(φ)ρ.
  std::vector<typename I::Model> violations;
  std::optional<int> carrier_bound;

  bool ok() const { return violations.empty(); }
};

/// M' ⊨ pSen(φ)ρ iff M ⊨ ρ, for every M in pMod(φ)M'.
template <BaseInstitution I>
SatisfactionReport<I> check_satisfaction(const I& inst, const Partial<I>& phi, const typename I::Model& target_model,
                                         const typename I::Sentence& rho, const Bounds& b = {}) {
  auto translated = psen_translate(inst, phi, rho);
  if (!translated) throw ContractError("sentence is outside the domain of the partial translation");
  SatisfactionReport<I> r{*translated, inst.satisfies(target_model, *translated), {}, {}, semantic_bound(inst, b)};
  r.reducts = pmod_reduct(inst, phi, target_model, b).models;
  for (const auto& m : r.reducts)
    if (inst.satisfies(m, rho) != r.target_holds) r.violations.push_back(m);
  return r;
}

/// pSen(φ) is total. Decided as dom φ = Σ, or vacuously when Σ has no
/// sentences at all.
template <BaseInstitution I>
bool is_sen_maximal(const I& inst, const Partial<I>& phi) {
  return dom(inst, phi) == psource(inst, phi) || inst.has_no_sentences(psource(inst, phi));
}

/// Every reduct set along φ is a singleton (relative to the bound for MSA).
template <BaseInstitution I>
bool is_mod_maximal(const I& inst, const Partial<I>& phi, const Bounds& b = {}) {
  for (const auto& m : inst.enumerate_models(ptarget(inst, phi), b))
    if (pmod_reduct(inst, phi, m, b).models.size() != 1) return false;
  return true;
}

template <BaseInstitution I>
bool is_total(const I& inst, const Partial<I>& phi, const Bounds& b = {}) {
  return is_sen_maximal(inst, phi) && is_mod_maximal(inst, phi, b);
}

namespace detail {

template <class Model>
std::vector<Model> sorted_unique(std::vector<Model> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace detail

/// pMod(θ) applied to every member of a reduct set, as one set.
template <BaseInstitution I>
std::vector<typename I::Model> pmod_image(const I& inst, const Partial<I>& theta,
                                          const std::vector<typename I::Model>& models, const Bounds& b) {
  std::vector<typename I::Model> out;
  for (const auto& m : models) {
    auto r = pmod_reduct(inst, theta, m, b).models;
    out.insert(out.end(), r.begin(), r.end());
  }
  return detail::sorted_unique(std::move(out));
}

/// θ : Σ0 ⇀ Σ1, φ : Σ1 ⇀ Σ2. True iff pMod(φ);pMod(θ) = pMod(θ;φ) on every
/// enumerated Σ2-model.
template <BaseInstitution I>
bool is_mod_strict(const I& inst, const Partial<I>& phi, const Partial<I>& theta, const Bounds& b = {}) {
  if (!(ptarget(inst, theta) == psource(inst, phi))) throw ContractError("is_mod_strict: theta does not end where phi starts");
  auto composite = compose(inst, theta, phi);
  for (const auto& m2 : inst.enumerate_models(ptarget(inst, phi), b)) {
    auto stepwise = pmod_image(inst, theta, pmod_reduct(inst, phi, m2, b).models, b);
    auto direct = detail::sorted_unique(pmod_reduct(inst, composite, m2, b).models);
    if (stepwise != direct) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// PL model homomorphisms

namespace pl {

/// A PL homomorphism M ⊆ N; the pair (lower, upper).
using Homomorphism = std::pair<Model, Model>;

/// pMod(φ)(M' ⊆ N'): every homomorphism M ⊆ N with M ∈ pMod(φ)M' and
/// N ∈ pMod(φ)N'.
inline std::vector<Homomorphism> homomorphism_reduct(const Institution& inst,
                                                     const PartialMorphism<Morphism>& phi, const Model& lower,
                                                     const Model& upper, const Bounds& b = {}) {
  if (!std::includes(upper.truths.begin(), upper.truths.end(), lower.truths.begin(), lower.truths.end()))
    throw ContractError("homomorphism reduct of a non-inclusion");
  auto lows = pmod_reduct(inst, phi, lower, b).models;
  auto ups = pmod_reduct(inst, phi, upper, b).models;
  std::vector<Homomorphism> out;
  for (const auto& m : lows)
    for (const auto& n : ups)
      if (std::includes(n.truths.begin(), n.truths.end(), m.truths.begin(), m.truths.end())) out.emplace_back(m, n);
  return out;
}

}  // namespace pl

}  // namespace blendkit
