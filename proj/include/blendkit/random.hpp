#pragma once

// Seeded generators for signatures, morphisms, sentences and models. Every
// draw goes through Rng::below, which reduces a 64-bit Mersenne Twister
// output by modulo, so a seed gives the same structures on every platform.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "blendkit/msa.hpp"
#include "blendkit/partial.hpp"
#include "blendkit/pl.hpp"

namespace blendkit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform-ish in [0, n); n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  /// Inclusive range.
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }
  bool chance(std::size_t num, std::size_t den) { return below(den) < num; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

namespace pl {

/// {prefix1, ..., prefixn}.
inline Signature canonical_signature(std::size_t n, const std::string& prefix) {
  Signature s;
  for (std::size_t i = 1; i <= n; ++i) s.symbols.insert(prefix + std::to_string(i));
  return s;
}

inline Signature random_signature(Rng& rng, int min_size, int max_size, const std::string& prefix) {
  return canonical_signature(static_cast<std::size_t>(rng.between(min_size, max_size)), prefix);
}

/// A random total function; needs a non-empty target unless the source is
/// empty.
inline Morphism random_morphism(Rng& rng, const Signature& source, const Signature& target) {
  if (target.empty() && !source.empty()) throw ContractError("no morphism into an empty signature");
  std::vector<Symbol> tgt(target.symbols.begin(), target.symbols.end());
  Morphism m{source, target, {}};
  for (const auto& s : source.symbols) m.map.emplace(s, rng.pick(tgt));
  return m;
}

inline Signature random_subset(Rng& rng, const Signature& sig) {
  Signature out;
  for (const auto& s : sig.symbols)
    if (rng.chance(1, 2)) out.symbols.insert(s);
  return out;
}

/// Random domain, then a random total part; the domain is empty when the
/// target is.
inline PartialMorphism<Morphism> random_partial(Rng& rng, const Signature& source, const Signature& target) {
  Signature d = target.empty() ? Signature{} : random_subset(rng, source);
  Sets c;
  return make_partial(c, source, random_morphism(rng, d, target));
}

inline Model random_model(Rng& rng, const Signature& sig) {
  Model m{sig, {}};
  for (const auto& s : sig.symbols)
    if (rng.chance(1, 2)) m.truths.insert(s);
  return m;
}

/// Random sentence of depth at most `depth` over a non-empty signature.
inline Sentence random_sentence(Rng& rng, const Signature& sig, int depth) {
  if (sig.empty()) throw ContractError("no sentences over the empty signature");
  std::vector<Symbol> syms(sig.symbols.begin(), sig.symbols.end());
  if (depth == 0 || rng.chance(1, 3)) return Sentence::var(rng.pick(syms));
  if (rng.chance(1, 2)) return Sentence::neg(random_sentence(rng, sig, depth - 1));
  return Sentence::conj(random_sentence(rng, sig, depth - 1), random_sentence(rng, sig, depth - 1));
}

/// Every partial morphism source ⇀ target: domains in subset index order,
/// then total parts in lexicographic order.
inline std::vector<PartialMorphism<Morphism>> enumerate_partial_morphisms(const Signature& source,
                                                                          const Signature& target) {
  std::vector<PartialMorphism<Morphism>> out;
  Sets c;
  for (const auto& d : subobjects(source)) {
    auto incl = *c.inclusion(d, source);
    for (auto& f : enumerate_morphisms(d, target)) out.push_back({incl, std::move(f)});
  }
  return out;
}

}  // namespace pl

namespace msa {

inline std::string sort_name(std::size_t i, const std::string& prefix) { return prefix + std::to_string(i); }

/// Sorts prefix1..; ops named "f", "g", "h", "c", "d" with random ranks of
/// arity <= max_arity. Names repeat across ranks now and then.
inline Signature random_signature(Rng& rng, int min_sorts, int max_sorts, int max_ops, int max_arity,
                                  const std::string& prefix) {
  static const std::vector<std::string> names{"f", "g", "h", "c", "d"};
  Signature sig;
  int n = rng.between(min_sorts, max_sorts);
  for (int i = 1; i <= n; ++i) sig.sorts.insert(sort_name(static_cast<std::size_t>(i), prefix));
  if (n == 0) return sig;
  std::vector<Sort> sorts(sig.sorts.begin(), sig.sorts.end());
  int ops = rng.between(0, max_ops);
  for (int i = 0; i < ops; ++i) {
    OpDecl op;
    op.name = rng.pick(names);
    int arity = rng.between(0, max_arity);
    for (int a = 0; a < arity; ++a) op.args.push_back(rng.pick(sorts));
    op.result = rng.pick(sorts);
    sig.ops.insert(op);
  }
  return sig;
}

/// A morphism out of `source` into a freshly built target: sorts are merged
/// or kept, op images are merged within a rank now and then, and junk sorts
/// and ops may be added.
inline Morphism random_morphism_from(Rng& rng, const Signature& source, const std::string& prefix, int extra = 1) {
  Morphism m{source, {}, {}, {}};
  std::vector<Sort> src(source.sorts.begin(), source.sorts.end());
  std::size_t n = src.empty() ? 0 : 1 + rng.below(src.size());
  for (std::size_t i = 1; i <= n; ++i) m.target.sorts.insert(sort_name(i, prefix));
  std::vector<Sort> tgt(m.target.sorts.begin(), m.target.sorts.end());
  // onto the first n target sorts, remaining sources anywhere
  std::vector<std::size_t> order(src.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  for (std::size_t i = 0; i < src.size(); ++i) {
    std::size_t s = order[i];
    m.sorts[src[s]] = i < n ? tgt[i] : rng.pick(tgt);
  }
  int junk_sorts = rng.between(0, extra);
  for (int i = 0; i < junk_sorts; ++i) m.target.sorts.insert(sort_name(n + 1 + static_cast<std::size_t>(i), prefix));
  tgt.assign(m.target.sorts.begin(), m.target.sorts.end());

  static const std::vector<std::string> names{"f", "g", "h", "k"};
  for (const auto& op : source.ops) {
    OpDecl rank{"", m.sorts_of(op.args), m.sort(op.result)};
    std::vector<std::string> existing;
    for (const auto& t : m.target.ops)
      if (t.args == rank.args && t.result == rank.result) existing.push_back(t.name);
    std::string name;
    if (!existing.empty() && rng.chance(1, 3)) {
      name = rng.pick(existing);
    } else {
      do {
        name = rng.pick(names) + std::to_string(rng.below(3));
      } while (std::find(existing.begin(), existing.end(), name) != existing.end());
    }
    rank.name = name;
    m.target.ops.insert(rank);
    m.ops[op] = name;
  }
  if (!tgt.empty()) {
    int junk_ops = rng.between(0, extra);
    for (int i = 0; i < junk_ops; ++i) {
      OpDecl op{"j" + std::to_string(i), {}, rng.pick(tgt)};
      if (rng.chance(1, 2)) op.args.push_back(rng.pick(tgt));
      m.target.ops.insert(op);
    }
  }
  return m;
}

/// Any morphism source -> target found by random search, or none.
inline std::optional<Morphism> random_morphism_between(Rng& rng, const Signature& source, const Signature& target,
                                                       int tries = 50) {
  std::vector<Sort> tgt(target.sorts.begin(), target.sorts.end());
  if (tgt.empty() && !source.sorts.empty()) return std::nullopt;
  for (int t = 0; t < tries; ++t) {
    Morphism m{source, target, {}, {}};
    for (const auto& s : source.sorts) m.sorts[s] = rng.pick(tgt);
    bool ok = true;
    for (const auto& op : source.ops) {
      std::vector<OpDecl> cands;
      auto args = m.sorts_of(op.args);
      auto res = m.sort(op.result);
      for (const auto& o : target.ops)
        if (o.args == args && o.result == res) cands.push_back(o);
      if (cands.empty()) {
        ok = false;
        break;
      }
      m.ops[op] = rng.pick(cands).name;
    }
    if (ok) return m;
  }
  return std::nullopt;
}

inline Signature random_subobject(Rng& rng, const Signatures& sys, const Signature& sig) {
  auto subs = subobjects(sys, sig);
  return rng.pick(subs);
}

/// Random domain (a sub-object in `sys`) with a total part built out of it.
inline PartialMorphism<Morphism> random_partial_from(Rng& rng, const Signatures& sys, const Signature& source,
                                                     const std::string& prefix) {
  auto d = random_subobject(rng, sys, source);
  auto total = random_morphism_from(rng, d, prefix);
  return {*sys.inclusion(d, source), total};
}

/// Random algebra with carriers of size <= max_carrier; carriers that must
/// hold an op result are non-empty.
inline Algebra random_algebra(Rng& rng, const Signature& sig, int max_carrier) {
  Algebra a{sig, {}, {}};
  for (const auto& s : sig.sorts) a.carriers[s] = rng.between(0, max_carrier);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& op : sig.ops)
      if (a.table_size(op) > 0 && a.carriers[op.result] == 0) {
        a.carriers[op.result] = std::max(1, max_carrier);
        changed = true;
      }
  }
  for (const auto& op : sig.ops) {
    std::vector<int> table(a.table_size(op));
    for (auto& v : table) v = static_cast<int>(rng.below(static_cast<std::size_t>(a.carrier(op.result))));
    a.tables[op] = std::move(table);
  }
  return a;
}

/// Random term of sort `s` with the given variables in scope.
inline std::optional<Term> random_term(Rng& rng, const Signature& sig, const Sort& s,
                                       const std::vector<Variable>& scope, int depth) {
  std::vector<Term> leaves;
  for (const auto& v : scope)
    if (v.sort == s) leaves.push_back(Term::variable(v.name, v.sort));
  for (const auto& op : sig.ops)
    if (op.result == s && op.args.empty()) leaves.push_back(Term::apply(op));
  std::vector<OpDecl> branches;
  if (depth > 0)
    for (const auto& op : sig.ops)
      if (op.result == s && !op.args.empty()) branches.push_back(op);
  if (!branches.empty() && (leaves.empty() || rng.chance(1, 2))) {
    const auto& op = rng.pick(branches);
    std::vector<Term> args;
    for (const auto& a : op.args) {
      auto t = random_term(rng, sig, a, scope, depth - 1);
      if (!t) return leaves.empty() ? std::nullopt : std::optional<Term>(rng.pick(leaves));
      args.push_back(std::move(*t));
    }
    return Term::apply(op, std::move(args));
  }
  if (leaves.empty()) return std::nullopt;
  return rng.pick(leaves);
}

namespace detail {

inline Sentence random_body(Rng& rng, const Signature& sig, std::vector<Variable>& scope, int depth, int max_vars) {
  std::vector<Sort> sorts(sig.sorts.begin(), sig.sorts.end());
  if (depth > 0 && rng.chance(2, 3)) {
    switch (rng.below(6)) {
      case 0:
        return Sentence::neg(random_body(rng, sig, scope, depth - 1, max_vars));
      case 1:
        return Sentence::conj(random_body(rng, sig, scope, depth - 1, max_vars),
                              random_body(rng, sig, scope, depth - 1, max_vars));
      case 2:
        return Sentence::disj(random_body(rng, sig, scope, depth - 1, max_vars),
                              random_body(rng, sig, scope, depth - 1, max_vars));
      case 3:
        return Sentence::implies(random_body(rng, sig, scope, depth - 1, max_vars),
                                 random_body(rng, sig, scope, depth - 1, max_vars));
      default: {
        std::vector<Variable> vars;
        int n = rng.between(1, max_vars);
        for (int i = 0; i < n; ++i) vars.push_back(Variable{"x" + std::to_string(scope.size() + vars.size() + 1), rng.pick(sorts)});
        std::size_t old = scope.size();
        scope.insert(scope.end(), vars.begin(), vars.end());
        auto body = random_body(rng, sig, scope, depth - 1, max_vars);
        scope.resize(old);
        return rng.chance(1, 2) ? Sentence::forall(std::move(vars), std::move(body))
                                : Sentence::exists(std::move(vars), std::move(body));
      }
    }
  }
  // an equation over some sort with a term available, else a tautology
  for (int attempt = 0; attempt < 8; ++attempt) {
    const auto& s = rng.pick(sorts);
    auto l = random_term(rng, sig, s, scope, 1);
    auto r = random_term(rng, sig, s, scope, 1);
    if (l && r) return Sentence::eq(std::move(*l), std::move(*r));
  }
  Variable v{"x" + std::to_string(scope.size() + 1), rng.pick(sorts)};
  return Sentence::forall({v}, Sentence::eq(Term::variable(v.name, v.sort), Term::variable(v.name, v.sort)));
}

}  // namespace detail

/// Random closed sentence with connective depth <= depth and quantifier
/// blocks of at most max_vars variables. Needs at least one sort.
inline Sentence random_sentence(Rng& rng, const Signature& sig, int depth, int max_vars = 2) {
  if (sig.sorts.empty()) throw ContractError("no sentences over a signature without sorts");
  std::vector<Variable> scope;
  return detail::random_body(rng, sig, scope, depth, max_vars);
}

}  // namespace msa

}  // namespace blendkit
