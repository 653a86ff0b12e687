#pragma once

// Theories, semantic entailment, and the partial theory morphism notions:
// weak and strong 3/2-theory morphisms, and partial morphisms over the
// closed / strong inclusion systems of closed theories.
//
// Closures E• are infinite and never built. A closed theory is kept as a
// generator: either axioms, or the restriction of another closed theory to a
// sub-signature (its dom-consequences). All comparisons of closures go
// through model classes, which is exact for PL and relative to the carrier
// bound for MSA.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "blendkit/config.hpp"
#include "blendkit/error.hpp"
#include "blendkit/partial.hpp"
#include "blendkit/pl.hpp"
#include "blendkit/three_halves.hpp"

namespace blendkit {

template <BaseInstitution I>
void validate(const I& inst, const Theory<I>& t) {
  for (const auto& e : t.axioms)
    if (!inst.sentence_over(t.signature, e)) throw ValidationError("theory axiom outside the theory's signature");
}

/// E ⊨ ρ: every model of E satisfies ρ.
template <BaseInstitution I>
bool entails(const I& inst, const Theory<I>& t, const typename I::Sentence& rho, const Bounds& b = {}) {
  if (!inst.sentence_over(t.signature, rho)) throw ValidationError("entailment query outside the theory's signature");
  for (const auto& m : models_of(inst, t, b))
    if (!inst.satisfies(m, rho)) return false;
  return true;
}

/// E' ⊨ Sen(χ)E.
template <BaseInstitution I>
bool is_theory_morphism(const I& inst, const typename I::Morphism& chi, const Theory<I>& t, const Theory<I>& t2,
                        const Bounds& b = {}) {
  if (!(inst.source(chi) == t.signature) || !(inst.target(chi) == t2.signature))
    throw ValidationError("morphism does not connect the theories' signatures");
  auto target_models = models_of(inst, t2, b);
  for (const auto& e : t.axioms) {
    auto translated = inst.translate(chi, e);
    for (const auto& m : target_models)
      if (!inst.satisfies(m, translated)) return false;
  }
  return true;
}

/// Closed theory given by generators.
template <BaseInstitution I>
struct ClosedTheory {
  enum class Kind { Axioms, Restriction };
  Kind kind = Kind::Axioms;
  typename I::Object signature;
  /// Kind::Axioms: the closure of these.
  std::vector<typename I::Sentence> axioms;
  /// Kind::Restriction: ambient• ∩ Sen(signature).
  std::shared_ptr<const ClosedTheory> ambient;

  static ClosedTheory closure(const Theory<I>& t) { return {Kind::Axioms, t.signature, t.axioms, nullptr}; }
  static ClosedTheory restriction(const typename I::Object& sig, ClosedTheory ambient) {
    return {Kind::Restriction, sig, {}, std::make_shared<const ClosedTheory>(std::move(ambient))};
  }
};

/// Mod of a closed theory. For a restriction this is the projection of the
/// ambient model class, which is the model class of its dom-consequences,
/// except over a signature without sentences: there the restriction is
/// empty and every model qualifies, even when the ambient is inconsistent.
template <BaseInstitution I>
std::set<typename I::Model> model_class(const I& inst, const ClosedTheory<I>& t, const Bounds& b = {}) {
  if (t.kind == ClosedTheory<I>::Kind::Axioms) {
    auto ms = models_of(inst, Theory<I>{t.signature, t.axioms}, b);
    return {ms.begin(), ms.end()};
  }
  if (inst.has_no_sentences(t.signature)) {
    auto ms = inst.enumerate_models(t.signature, b);
    return {ms.begin(), ms.end()};
  }
  auto incl = inclusion_or_throw(inst, t.signature, t.ambient->signature);
  std::set<typename I::Model> out;
  for (const auto& m : model_class(inst, *t.ambient, b)) out.insert(inst.reduct(incl, m));
  return out;
}

/// Same closure, compared through model classes.
template <BaseInstitution I>
bool equivalent(const I& inst, const ClosedTheory<I>& a, const ClosedTheory<I>& c, const Bounds& b = {}) {
  return a.signature == c.signature && model_class(inst, a, b) == model_class(inst, c, b);
}

/// χ : T → T' between closed theories: the χ-reduct of every T'-model is a
/// T-model.
template <BaseInstitution I>
bool is_closed_theory_morphism(const I& inst, const typename I::Morphism& chi, const ClosedTheory<I>& t,
                               const ClosedTheory<I>& t2, const Bounds& b = {}) {
  if (!(inst.source(chi) == t.signature) || !(inst.target(chi) == t2.signature)) return false;
  auto mods = model_class(inst, t, b);
  for (const auto& m : model_class(inst, t2, b))
    if (!mods.count(inst.reduct(chi, m))) return false;
  return true;
}

enum class TheoryInclusionKind { Closed, Strong };

inline std::string to_string(TheoryInclusionKind k) { return k == TheoryInclusionKind::Closed ? "closed" : "strong"; }

/// The two inclusion systems closed theories inherit from signatures.
///
///   system   surjections                          inclusions (Σ,E) ⊆ (Σ',E')
///   closed   Σ → Σ' surjection                    Σ ⊆ Σ' and E = Sen(Σ) ∩ E'
///   strong   Σ → Σ' surjection, Sen(φ)E = E'      Σ ⊆ Σ'
template <BaseInstitution I>
class TheoryInclusions {
 public:
  TheoryInclusions(const I& inst, TheoryInclusionKind kind, Bounds bounds = {})
      : inst_(&inst), kind_(kind), bounds_(bounds) {}

  TheoryInclusionKind kind() const { return kind_; }

  bool is_inclusion(const ClosedTheory<I>& sub, const ClosedTheory<I>& super) const {
    auto incl = inst_->inclusion(sub.signature, super.signature);
    if (!incl) return false;
    if (kind_ == TheoryInclusionKind::Strong) return true;
    return model_class(*inst_, sub, bounds_) ==
           model_class(*inst_, ClosedTheory<I>::restriction(sub.signature, super), bounds_);
  }

  bool is_morphism(const typename I::Morphism& chi, const ClosedTheory<I>& t, const ClosedTheory<I>& t2) const {
    return is_closed_theory_morphism(*inst_, chi, t, t2, bounds_);
  }

  /// Sen(φ)E = E' at closure level: Mod(E') is exactly the set of
  /// Σ'-models whose φ-reduct satisfies E.
  bool is_surjection(const typename I::Morphism& chi, const ClosedTheory<I>& t, const ClosedTheory<I>& t2) const {
    if (!inst_->is_surjection(chi) || !is_morphism(chi, t, t2)) return false;
    if (kind_ == TheoryInclusionKind::Closed) return true;
    auto mods = model_class(*inst_, t, bounds_);
    std::set<typename I::Model> preimage;
    for (const auto& m : inst_->enumerate_models(t2.signature, bounds_))
      if (mods.count(inst_->reduct(chi, m))) preimage.insert(m);
    return preimage == model_class(*inst_, t2, bounds_);
  }

 private:
  const I* inst_;
  TheoryInclusionKind kind_;
  Bounds bounds_;
};

/// Partial morphism of closed theories: φ : Σ ⇀ Σ' with the definition
/// domain carrying its own closed theory.
template <BaseInstitution I>
struct PartialTheoryMorphism {
  ClosedTheory<I> source;
  ClosedTheory<I> target;
  ClosedTheory<I> domain;
  Partial<I> phi;
};

/// Valid over the given theory inclusion system: dom ⊆ source is an
/// inclusion there and φ⁰ : dom → target is a theory morphism.
template <BaseInstitution I>
bool validates(const I& inst, const PartialTheoryMorphism<I>& f, TheoryInclusionKind kind, const Bounds& b = {}) {
  if (!(f.domain.signature == dom(inst, f.phi)) || !(f.source.signature == psource(inst, f.phi)) ||
      !(f.target.signature == ptarget(inst, f.phi)))
    return false;
  TheoryInclusions<I> sys(inst, kind, b);
  return sys.is_inclusion(f.domain, f.source) && sys.is_morphism(f.phi.total, f.domain, f.target);
}

template <BaseInstitution I>
bool is_closed_partial_theory_morphism(const I& inst, const PartialTheoryMorphism<I>& f, const Bounds& b = {}) {
  return validates(inst, f, TheoryInclusionKind::Closed, b);
}

template <BaseInstitution I>
bool is_strong_partial_theory_morphism(const I& inst, const PartialTheoryMorphism<I>& f, const Bounds& b = {}) {
  return validates(inst, f, TheoryInclusionKind::Strong, b);
}

/// The candidate φ̄ : (Σ,E•) ⇀ (Σ',E'•) with dom φ̄ = (dom φ, E• ∩ Sen(dom φ)),
/// built without checking anything.
template <BaseInstitution I>
PartialTheoryMorphism<I> closed_candidate(const I& inst, const Partial<I>& phi, const Theory<I>& t,
                                          const Theory<I>& t2) {
  auto src = ClosedTheory<I>::closure(t);
  return {src, ClosedTheory<I>::closure(t2), ClosedTheory<I>::restriction(dom(inst, phi), src), phi};
}

template <BaseInstitution I>
struct TheoryMorphismReport {
  /// E' ⊨ Sen(φ⁰)E; only meaningful for total φ.
  std::optional<bool> plain;
  bool weak32 = false;
  bool strong32 = false;
  bool closed_partial = false;
  /// The closed candidate validated under the strong inclusion system.
  bool strong_partial = false;
  /// An E'-model whose φ⁰-reduct is not the dom part of any E-model.
  std::optional<typename I::Model> weak32_counterexample;
  /// An E'-model with no E-model in its reduct set.
  std::optional<typename I::Model> strong32_counterexample;
  std::optional<int> carrier_bound;
};

/// E-model class projected to dom φ.
template <BaseInstitution I>
std::set<typename I::Model> projection(const I& inst, const Partial<I>& phi, const Theory<I>& t, const Bounds& b = {}) {
  std::set<typename I::Model> out;
  for (const auto& m : models_of(inst, t, b)) out.insert(inst.reduct(phi.witness, m));
  return out;
}

template <BaseInstitution I>
TheoryMorphismReport<I> classify_32_theory_morphism(const I& inst, const Partial<I>& phi, const Theory<I>& t,
                                                    const Theory<I>& t2, const Bounds& b = {}) {
  validate(inst, phi);
  if (!(psource(inst, phi) == t.signature) || !(ptarget(inst, phi) == t2.signature))
    throw ValidationError("partial morphism does not connect the theories' signatures");
  TheoryMorphismReport<I> r;
  r.carrier_bound = semantic_bound(inst, b);
  if (is_total_morphism(inst, phi)) r.plain = is_theory_morphism(inst, phi.total, t, t2, b);

  const auto target_models = models_of(inst, t2, b);
  // Mod(E• ∩ Sen(dom φ)); the plain projection unless dom φ has no sentences
  const auto proj = model_class(inst, ClosedTheory<I>::restriction(dom(inst, phi), ClosedTheory<I>::closure(t)), b);
  r.weak32 = true;
  for (const auto& m2 : target_models)
    if (!proj.count(inst.reduct(phi.total, m2))) {
      r.weak32 = false;
      r.weak32_counterexample = m2;
      break;
    }

  r.strong32 = true;
  for (const auto& m2 : target_models) {
    bool found = false;
    for (const auto& m : pmod_reduct(inst, phi, m2, b).models)
      if (satisfies_all_axioms(inst, m, t)) {
        found = true;
        break;
      }
    if (!found) {
      r.strong32 = false;
      r.strong32_counterexample = m2;
      break;
    }
  }

  auto candidate = closed_candidate(inst, phi, t, t2);
  r.closed_partial = is_closed_partial_theory_morphism(inst, candidate, b);
  r.strong_partial = is_strong_partial_theory_morphism(inst, candidate, b);
  return r;
}

/// φ ↦ φ̄ for a weak 3/2-theory morphism.
template <BaseInstitution I>
PartialTheoryMorphism<I> to_closed_partial(const I& inst, const Partial<I>& phi, const Theory<I>& t,
                                           const Theory<I>& t2, const Bounds& b = {}) {
  auto r = classify_32_theory_morphism(inst, phi, t, t2, b);
  if (!r.weak32) throw ContractError("to_closed_partial needs a weak 3/2-theory morphism");
  return closed_candidate(inst, phi, t, t2);
}

/// Composition in the category of closed-partial theory morphisms: the
/// signature part composes in pSign, and the pullback domain inherits the
/// restriction of the first domain theory.
template <BaseInstitution I>
PartialTheoryMorphism<I> compose(const I& inst, const PartialTheoryMorphism<I>& f,
                                 const PartialTheoryMorphism<I>& g) {
  auto phi = compose(inst, f.phi, g.phi);
  return {f.source, g.target, ClosedTheory<I>::restriction(dom(inst, phi), f.domain), phi};
}

/// Same partial morphism and equivalent theories at every node.
template <BaseInstitution I>
bool equivalent(const I& inst, const PartialTheoryMorphism<I>& f, const PartialTheoryMorphism<I>& g,
                const Bounds& b = {}) {
  return f.phi == g.phi && equivalent(inst, f.source, g.source, b) && equivalent(inst, f.target, g.target, b) &&
         equivalent(inst, f.domain, g.domain, b);
}

// ---------------------------------------------------------------------------
// Sentence-level check of weak 3/2-theory morphisms (PL)

namespace pl {

/// Sen(φ)E• ⊆ E'• restricted to sentences of depth <= `depth`: every
/// dom φ-sentence entailed by E translates to one entailed by E'. Sentences
/// are taken one per truth table over dom φ (`sentence_representatives`);
/// entailment by E depends only on that table. Representatives are cached
/// per domain signature.
class WeakSyntacticChecker {
 public:
  explicit WeakSyntacticChecker(int depth = 4, Bounds bounds = {}) : depth_(depth), bounds_(bounds) {}

  struct Result {
    bool holds = true;
    std::optional<Sentence> counterexample;
    std::size_t sentences = 0;
  };

  Result check(const PartialMorphism<Morphism>& phi, const Theory<Institution>& t, const Theory<Institution>& t2) {
    Institution inst;
    const auto& d = phi.witness.source;
    const auto& reps = representatives(d);
    // E ⊨ ρ for ρ over dom φ iff ρ holds on the projection of Mod(E).
    TableEvaluator on_dom(d, bounds_);
    TruthTable proj(on_dom.model_count());
    for (const auto& m : models_of(inst, t, bounds_)) proj.set(model_index(reduct(phi.witness, m)));
    TableEvaluator on_target(t2.signature, bounds_);
    TruthTable target_models(on_target.model_count());
    for (const auto& m : models_of(inst, t2, bounds_)) target_models.set(model_index(m));
    Translator tr(phi.total);

    Result r;
    r.sentences = reps.size();
    for (const auto& rho : reps) {
      if (!proj.subset_of(on_dom(rho))) continue;
      auto translated = tr(rho);
      if (!target_models.subset_of(on_target(*translated))) {
        r.holds = false;
        r.counterexample = rho;
        return r;
      }
    }
    return r;
  }

 private:
  const std::vector<Sentence>& representatives(const Signature& d) {
    auto it = cache_.find(d);
    if (it == cache_.end()) it = cache_.emplace(d, sentence_representatives(d, depth_, bounds_)).first;
    return it->second;
  }

  int depth_;
  Bounds bounds_;
  std::map<Signature, std::vector<Sentence>> cache_;
};

}  // namespace pl

}  // namespace blendkit
