#pragma once

// Partial signature morphisms over a category with an inclusion system.
// φ : Σ ⇀ Σ' is a witness inclusion dom φ ⊆ Σ together with a total
// φ⁰ : dom φ → Σ'. Composition pulls φ⁰ back along dom φ' ⊆ Σ'.

#include <ostream>

#include "blendkit/error.hpp"
#include "blendkit/inclusion.hpp"

namespace blendkit {

template <class Morphism>
struct PartialMorphism {
  /// dom φ ⊆ Σ, an abstract inclusion.
  Morphism witness;
  /// φ⁰ : dom φ → Σ'.
  Morphism total;

  friend auto operator<=>(const PartialMorphism&, const PartialMorphism&) = default;
  friend bool operator==(const PartialMorphism&, const PartialMorphism&) = default;
};

template <class Morphism>
struct PartialFactorization {
  PartialMorphism<Morphism> surjection;
  PartialMorphism<Morphism> inclusion;

  friend bool operator==(const PartialFactorization&, const PartialFactorization&) = default;
};

template <InclusionSystem C>
using Partial = PartialMorphism<typename C::Morphism>;

template <InclusionSystem C>
const typename C::Object& psource(const C& c, const Partial<C>& phi) {
  return c.target(phi.witness);
}

template <InclusionSystem C>
const typename C::Object& ptarget(const C& c, const Partial<C>& phi) {
  return c.target(phi.total);
}

template <InclusionSystem C>
const typename C::Object& dom(const C& c, const Partial<C>& phi) {
  return c.source(phi.witness);
}

template <InclusionSystem C>
void validate(const C& c, const Partial<C>& phi) {
  c.validate(phi.witness);
  c.validate(phi.total);
  if (!c.is_inclusion(phi.witness)) throw ValidationError("definition domain is not an abstract sub-object of the source");
  if (!(c.source(phi.total) == c.source(phi.witness)))
    throw ValidationError("total part does not start at the definition domain");
}

/// Assemble φ from its domain object and total part; `domain` must be an
/// abstract sub-object of `source`.
template <InclusionSystem C>
Partial<C> make_partial(const C& c, const typename C::Object& source, const typename C::Morphism& total) {
  auto incl = c.inclusion(c.source(total), source);
  if (!incl) throw ValidationError("definition domain is not an abstract sub-object of the source");
  Partial<C> phi{std::move(*incl), total};
  validate(c, phi);
  return phi;
}

/// [χ]: the total morphism χ seen as a partial one.
template <InclusionSystem C>
Partial<C> embed(const C& c, const typename C::Morphism& chi) {
  return Partial<C>{c.identity(c.source(chi)), chi};
}

template <InclusionSystem C>
Partial<C> partial_identity(const C& c, const typename C::Object& sig) {
  return embed(c, c.identity(sig));
}

/// dom φ = Σ. For the shipped bases this is the same as totality of φ.
template <InclusionSystem C>
bool is_total_morphism(const C& c, const Partial<C>& phi) {
  return dom(c, phi) == psource(c, phi);
}

/// φ;φ' via the semi-inclusive pullback of φ⁰ along dom φ' ⊆ Σ'.
template <InclusionSystem C>
Partial<C> compose_by_pullback(const C& c, const Partial<C>& phi, const Partial<C>& next) {
  if (!(ptarget(c, phi) == psource(c, next))) throw ContractError("composition of non-composable partial morphisms");
  auto sq = semi_inclusive_pullback(c, phi.total, next.witness);
  return Partial<C>{c.compose(sq.left, phi.witness), c.compose(sq.bottom, next.total)};
}

/// Composition; when φ' is total the pullback is trivial and dom(φ;φ') = dom φ.
template <InclusionSystem C>
Partial<C> compose(const C& c, const Partial<C>& phi, const Partial<C>& next) {
  if (!(ptarget(c, phi) == psource(c, next))) throw ContractError("composition of non-composable partial morphisms");
  if (is_total_morphism(c, next)) return Partial<C>{phi.witness, c.compose(phi.total, next.total)};
  return compose_by_pullback(c, phi, next);
}

/// φ ≤ θ: dom φ ⊆ dom θ and φ⁰ is θ⁰ restricted to dom φ.
template <InclusionSystem C>
bool leq(const C& c, const Partial<C>& phi, const Partial<C>& theta) {
  if (!(psource(c, phi) == psource(c, theta)) || !(ptarget(c, phi) == ptarget(c, theta)))
    throw ContractError("order comparison of partial morphisms with different endpoints");
  auto incl = c.inclusion(dom(c, phi), dom(c, theta));
  if (!incl) return false;
  return phi.total == c.compose(*incl, theta.total);
}

/// Restriction of φ to a smaller definition domain.
template <InclusionSystem C>
Partial<C> restrict_to(const C& c, const Partial<C>& phi, const typename C::Object& sub) {
  auto into_dom = inclusion_or_throw(c, sub, dom(c, phi));
  return Partial<C>{c.compose(into_dom, phi.witness), c.compose(into_dom, phi.total)};
}

/// φ = e_φ ; i_φ with dom e_φ = dom φ, e_φ⁰ = e_{φ⁰} and i_φ = [i_{φ⁰}].
template <InclusionSystem C>
PartialFactorization<typename C::Morphism> factorize_partial(const C& c, const Partial<C>& phi) {
  auto f = c.factorize(phi.total);
  return {Partial<C>{phi.witness, f.surjection}, embed(c, f.inclusion)};
}

/// Abstract inclusions of pSign are the embedded base inclusions.
template <InclusionSystem C>
bool is_psign_inclusion(const C& c, const Partial<C>& phi) {
  return is_total_morphism(c, phi) && c.is_inclusion(phi.witness) && c.is_inclusion(phi.total);
}

/// Abstract surjections of pSign: φ⁰ is a base surjection, any domain.
template <InclusionSystem C>
bool is_psign_surjection(const C& c, const Partial<C>& phi) {
  return c.is_surjection(phi.total);
}

template <class Morphism>
std::ostream& operator<<(std::ostream& os, const PartialMorphism<Morphism>& phi) {
  return os << "dom " << phi.witness.source << " ; " << phi.total;
}

}  // namespace blendkit
