#pragma once

// Categories equipped with an inclusion system: every arrow factors uniquely
// as an abstract surjection followed by an abstract inclusion, inclusions form
// a partial order, and cospans with an inclusion leg have a canonical pullback
// whose opposite leg is again an inclusion.

#include <concepts>
#include <optional>
#include <string>

#include "blendkit/error.hpp"

namespace blendkit {

/// f = surjection ; inclusion. The image object is target(surjection).
template <class Morphism>
struct Factorization {
  Morphism surjection;
  Morphism inclusion;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// Square over the cospan (top, right):
///
///     A  --top-->  B
///     ^            ^
///    left        right
///     |            |
///     A' -bottom-> B'
///
/// `left` and `right` are abstract inclusions.
template <class Morphism>
struct PullbackSquare {
  Morphism top;
  Morphism right;
  Morphism bottom;
  Morphism left;

  friend bool operator==(const PullbackSquare&, const PullbackSquare&) = default;
};

/// Cocone over the span (left_span, right_span) with common source;
/// left_leg and right_leg meet at the apex.
template <class Morphism>
struct Cocone {
  Morphism left_span;
  Morphism right_span;
  Morphism left_leg;
  Morphism right_leg;

  friend bool operator==(const Cocone&, const Cocone&) = default;
};

// clang-format off
template <class C>
concept InclusionSystem = requires(const C& c,
                                   const typename C::Object& o,
                                   const typename C::Morphism& m) {
  { c.source(m) } -> std::convertible_to<typename C::Object>;
  { c.target(m) } -> std::convertible_to<typename C::Object>;
  { c.identity(o) } -> std::same_as<typename C::Morphism>;
  { c.compose(m, m) } -> std::same_as<typename C::Morphism>;
  { c.validate(m) };
  { c.is_inclusion(m) } -> std::same_as<bool>;
  { c.is_surjection(m) } -> std::same_as<bool>;
  { c.inclusion(o, o) } -> std::same_as<std::optional<typename C::Morphism>>;
  { c.factorize(m) } -> std::same_as<Factorization<typename C::Morphism>>;
  { c.pullback(m, m) } -> std::same_as<PullbackSquare<typename C::Morphism>>;
  { c.pushout(m, m) } -> std::same_as<Cocone<typename C::Morphism>>;
  { c.join(o, o, o) } -> std::same_as<typename C::Object>;
  { c.name() } -> std::convertible_to<std::string>;
};
// clang-format on

template <InclusionSystem C>
typename C::Morphism inclusion_or_throw(const C& c, const typename C::Object& sub,
                                        const typename C::Object& super) {
  auto incl = c.inclusion(sub, super);
  if (!incl) throw ContractError("object is not an abstract sub-object of the given object");
  return *incl;
}

template <InclusionSystem C>
bool is_subobject(const C& c, const typename C::Object& sub, const typename C::Object& super) {
  return c.inclusion(sub, super).has_value();
}

/// Factorization of `f`. Thin wrapper that validates first.
template <InclusionSystem C>
Factorization<typename C::Morphism> factorize(const C& c, const typename C::Morphism& f) {
  c.validate(f);
  return c.factorize(f);
}

/// The unique pullback of `f` along the inclusion `incl` whose left leg is an
/// inclusion.
template <InclusionSystem C>
PullbackSquare<typename C::Morphism> semi_inclusive_pullback(const C& c,
                                                             const typename C::Morphism& f,
                                                             const typename C::Morphism& incl) {
  if (!c.is_inclusion(incl)) throw ContractError("pullback leg is not an abstract inclusion");
  if (!(c.target(f) == c.target(incl)))
    throw ContractError("pullback legs do not share a codomain");
  return c.pullback(f, incl);
}

template <InclusionSystem C>
Cocone<typename C::Morphism> pushout(const C& c, const typename C::Morphism& f1,
                                     const typename C::Morphism& f2) {
  if (!(c.source(f1) == c.source(f2))) throw ContractError("pushout span legs have different sources");
  return c.pushout(f1, f2);
}

template <InclusionSystem C>
bool square_commutes(const C& c, const PullbackSquare<typename C::Morphism>& sq) {
  return c.compose(sq.left, sq.top) == c.compose(sq.bottom, sq.right);
}

template <InclusionSystem C>
bool cocone_commutes(const C& c, const Cocone<typename C::Morphism>& k) {
  return c.compose(k.left_span, k.left_leg) == c.compose(k.right_span, k.right_leg);
}

/// e;i = f, e a surjection, i an inclusion, and the two meet at the image.
template <InclusionSystem C>
bool is_factorization_of(const C& c, const Factorization<typename C::Morphism>& fact,
                         const typename C::Morphism& f) {
  return c.target(fact.surjection) == c.source(fact.inclusion) &&
         c.is_surjection(fact.surjection) && c.is_inclusion(fact.inclusion) &&
         c.compose(fact.surjection, fact.inclusion) == f;
}

/// Surjection stability for one semi-inclusive pullback square: a surjective
/// top arrow must have a surjective bottom arrow.
template <InclusionSystem C>
bool check_surjection_stability(const C& c, const PullbackSquare<typename C::Morphism>& sq) {
  return !c.is_surjection(sq.top) || c.is_surjection(sq.bottom);
}

}  // namespace blendkit
