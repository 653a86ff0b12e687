#pragma once

// Propositional logic: signatures are finite sets of symbols, sentences are
// built from symbols with conjunction and negation, models are subsets of the
// signature. Signature morphisms are total functions; SET carries the
// standard inclusion system (subset inclusions / surjective maps).

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "blendkit/config.hpp"
#include "blendkit/detail/quotient.hpp"
#include "blendkit/error.hpp"
#include "blendkit/inclusion.hpp"

namespace blendkit::pl {

using Symbol = std::string;

struct Signature {
  std::set<Symbol> symbols;

  Signature() = default;
  Signature(std::initializer_list<Symbol> syms) : symbols(syms) {}
  explicit Signature(std::set<Symbol> syms) : symbols(std::move(syms)) {}

  bool contains(const Symbol& s) const { return symbols.count(s) != 0; }
  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }

  /// Position of `s` in the sorted symbol order; bit `index_of(s)` of a model
  /// index records whether `s` is true.
  std::size_t index_of(const Symbol& s) const {
    auto it = symbols.find(s);
    if (it == symbols.end()) throw ValidationError("symbol '" + s + "' not in signature");
    return static_cast<std::size_t>(std::distance(symbols.begin(), it));
  }

  bool includes(const Signature& sub) const {
    return std::includes(symbols.begin(), symbols.end(), sub.symbols.begin(), sub.symbols.end());
  }

  friend auto operator<=>(const Signature&, const Signature&) = default;
  friend bool operator==(const Signature&, const Signature&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Signature& sig) {
  os << '{';
  bool first = true;
  for (const auto& s : sig.symbols) {
    if (!first) os << ", ";
    os << s;
    first = false;
  }
  return os << '}';
}

/// Total function between signatures.
struct Morphism {
  Signature source;
  Signature target;
  std::map<Symbol, Symbol> map;

  const Symbol& operator()(const Symbol& s) const {
    auto it = map.find(s);
    if (it == map.end()) throw ValidationError("morphism undefined on '" + s + "'");
    return it->second;
  }

  friend auto operator<=>(const Morphism&, const Morphism&) = default;
  friend bool operator==(const Morphism&, const Morphism&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Morphism& m) {
  os << m.source << " -> " << m.target << " {";
  bool first = true;
  for (const auto& [k, v] : m.map) {
    os << (first ? " " : ", ") << k << " |-> " << v;
    first = false;
  }
  return os << " }";
}

// ---------------------------------------------------------------------------
// Sentences

/// Immutable sentence AST. Subterms are shared, so enumerated slices reuse
/// their lower layers; equality and ordering are structural.
class Sentence {
 public:
  enum class Kind { Var, And, Not };

  static Sentence var(Symbol s) { return Sentence(Kind::Var, std::move(s), nullptr, nullptr); }
  static Sentence conj(const Sentence& l, const Sentence& r) {
    return Sentence(Kind::And, {}, l.node_, r.node_);
  }
  static Sentence neg(const Sentence& s) { return Sentence(Kind::Not, {}, s.node_, nullptr); }

  Kind kind() const { return node_->kind; }
  const Symbol& symbol() const { return node_->symbol; }
  Sentence left() const { return Sentence(node_->left); }
  Sentence right() const { return Sentence(node_->right); }
  Sentence inner() const { return Sentence(node_->left); }
  std::size_t depth() const { return node_->depth; }
  /// Identity of the shared node; used as a memo key.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Sentence& a, const Sentence& b) { return compare(a.node_.get(), b.node_.get()) == 0; }
  friend std::strong_ordering operator<=>(const Sentence& a, const Sentence& b) {
    int c = compare(a.node_.get(), b.node_.get());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  struct Node {
    Kind kind;
    Symbol symbol;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    std::size_t depth;
  };

  explicit Sentence(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  Sentence(Kind k, Symbol s, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r) {
    std::size_t d = 0;
    if (l) d = l->depth + 1;
    if (r) d = std::max(d, r->depth + 1);
    node_ = std::make_shared<const Node>(Node{k, std::move(s), std::move(l), std::move(r), d});
  }

  static int compare(const Node* a, const Node* b) {
    if (a == b) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    switch (a->kind) {
      case Kind::Var:
        return a->symbol < b->symbol ? -1 : (b->symbol < a->symbol ? 1 : 0);
      case Kind::Not:
        return compare(a->left.get(), b->left.get());
      case Kind::And: {
        int c = compare(a->left.get(), b->left.get());
        return c != 0 ? c : compare(a->right.get(), b->right.get());
      }
    }
    return 0;
  }

  std::shared_ptr<const Node> node_;
};

inline void write_sentence(std::ostream& os, const Sentence& s) {
  switch (s.kind()) {
    case Sentence::Kind::Var:
      os << s.symbol();
      break;
    case Sentence::Kind::Not:
      os << '!';
      write_sentence(os, s.inner());
      break;
    case Sentence::Kind::And:
      os << '(';
      write_sentence(os, s.left());
      os << " & ";
      write_sentence(os, s.right());
      os << ')';
      break;
  }
}

inline std::ostream& operator<<(std::ostream& os, const Sentence& s) {
  write_sentence(os, s);
  return os;
}

inline std::string to_string(const Sentence& s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

inline void collect_symbols(const Sentence& s, std::set<Symbol>& out) {
  switch (s.kind()) {
    case Sentence::Kind::Var:
      out.insert(s.symbol());
      break;
    case Sentence::Kind::Not:
      collect_symbols(s.inner(), out);
      break;
    case Sentence::Kind::And:
      collect_symbols(s.left(), out);
      collect_symbols(s.right(), out);
      break;
  }
}

inline std::set<Symbol> symbols_of(const Sentence& s) {
  std::set<Symbol> out;
  collect_symbols(s, out);
  return out;
}

/// True iff every symbol of `s` belongs to `sig`.
inline bool sentence_over(const Signature& sig, const Sentence& s) {
  switch (s.kind()) {
    case Sentence::Kind::Var:
      return sig.contains(s.symbol());
    case Sentence::Kind::Not:
      return sentence_over(sig, s.inner());
    case Sentence::Kind::And:
      return sentence_over(sig, s.left()) && sentence_over(sig, s.right());
  }
  return false;
}

inline void typecheck(const Signature& sig, const Sentence& s) {
  for (const auto& sym : symbols_of(s))
    if (!sig.contains(sym)) throw ValidationError("sentence " + to_string(s) + " mentions '" + sym + "' outside " + [&] {
                              std::ostringstream os;
                              os << sig;
                              return os.str();
                            }());
}

// ---------------------------------------------------------------------------
// Models

/// A model is the set of symbols it makes true.
struct Model {
  Signature signature;
  std::set<Symbol> truths;

  bool holds(const Symbol& s) const { return truths.count(s) != 0; }

  friend auto operator<=>(const Model&, const Model&) = default;
  friend bool operator==(const Model&, const Model&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Model& m) {
  return os << Signature(m.truths);
}

inline void validate(const Model& m) {
  for (const auto& s : m.truths)
    if (!m.signature.contains(s)) throw ValidationError("model makes '" + s + "' true outside its signature");
}

/// Canonical model order: index bit i is the truth value of the i-th symbol.
inline Model model_at(const Signature& sig, std::uint64_t index) {
  Model m{sig, {}};
  std::size_t i = 0;
  for (const auto& s : sig.symbols) {
    if ((index >> i) & 1U) m.truths.insert(s);
    ++i;
  }
  return m;
}

inline std::uint64_t model_index(const Model& m) {
  std::uint64_t index = 0;
  std::size_t i = 0;
  for (const auto& s : m.signature.symbols) {
    if (m.holds(s)) index |= (std::uint64_t{1} << i);
    ++i;
  }
  return index;
}

inline std::uint64_t model_count(const Signature& sig, const Bounds& bounds) {
  if (sig.size() > bounds.pl_symbol_cap || sig.size() >= 63)
    throw ResourceError("PL signature of " + std::to_string(sig.size()) + " symbols exceeds model enumeration cap of " +
                        std::to_string(bounds.pl_symbol_cap));
  return std::uint64_t{1} << sig.size();
}

/// All 2^|sig| models in canonical order.
inline std::vector<Model> enumerate_models(const Signature& sig, const Bounds& bounds = {}) {
  auto n = model_count(sig, bounds);
  if (n > bounds.enumeration_cap) throw ResourceError("model enumeration exceeds cap");
  std::vector<Model> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(model_at(sig, i));
  return out;
}

inline bool satisfies(const Model& m, const Sentence& s) {
  switch (s.kind()) {
    case Sentence::Kind::Var:
      if (!m.signature.contains(s.symbol()))
        throw ValidationError("sentence mentions '" + s.symbol() + "' outside the model's signature");
      return m.holds(s.symbol());
    case Sentence::Kind::Not:
      return !satisfies(m, s.inner());
    case Sentence::Kind::And:
      return satisfies(m, s.left()) && satisfies(m, s.right());
  }
  return false;
}

// ---------------------------------------------------------------------------
// Morphisms

inline void validate(const Morphism& m) {
  for (const auto& s : m.source.symbols) {
    auto it = m.map.find(s);
    if (it == m.map.end()) throw ValidationError("morphism does not map source symbol '" + s + "'");
    if (!m.target.contains(it->second))
      throw ValidationError("morphism maps '" + s + "' to '" + it->second + "' outside the target");
  }
  if (m.map.size() != m.source.size()) throw ValidationError("morphism maps symbols outside its source");
}

inline Morphism identity(const Signature& sig) {
  Morphism m{sig, sig, {}};
  for (const auto& s : sig.symbols) m.map.emplace(s, s);
  return m;
}

inline Morphism compose(const Morphism& f, const Morphism& g) {
  if (!(f.target == g.source)) throw ContractError("composition of non-composable PL morphisms");
  Morphism h{f.source, g.target, {}};
  for (const auto& [k, v] : f.map) h.map.emplace(k, g(v));
  return h;
}

inline Sentence translate(const Morphism& phi, const Sentence& s) {
  switch (s.kind()) {
    case Sentence::Kind::Var:
      if (!phi.source.contains(s.symbol()))
        throw ValidationError("sentence symbol '" + s.symbol() + "' outside the morphism's source");
      return Sentence::var(phi(s.symbol()));
    case Sentence::Kind::Not:
      return Sentence::neg(translate(phi, s.inner()));
    case Sentence::Kind::And:
      return Sentence::conj(translate(phi, s.left()), translate(phi, s.right()));
  }
  return s;
}

/// M(p) = M'(phi(p)) for every p in the source.
inline Model reduct(const Morphism& phi, const Model& target_model) {
  if (!(target_model.signature == phi.target)) throw ContractError("reduct of a model over the wrong signature");
  Model m{phi.source, {}};
  for (const auto& [p, img] : phi.map)
    if (target_model.holds(img)) m.truths.insert(p);
  return m;
}

/// Memoizing translator along a total morphism. Sentences that mention a
/// symbol outside the source come back empty instead of throwing; the memo
/// makes translating a shared-subterm slice linear in its node count.
class Translator {
 public:
  explicit Translator(Morphism phi) : phi_(std::move(phi)) {}

  std::optional<Sentence> operator()(const Sentence& s) {
    auto it = memo_.find(s.id());
    if (it != memo_.end()) return it->second.second;
    std::optional<Sentence> out;
    switch (s.kind()) {
      case Sentence::Kind::Var:
        if (phi_.source.contains(s.symbol())) out = Sentence::var(phi_(s.symbol()));
        break;
      case Sentence::Kind::Not:
        if (auto in = (*this)(s.inner())) out = Sentence::neg(*in);
        break;
      case Sentence::Kind::And: {
        auto l = (*this)(s.left());
        if (!l) break;
        auto r = (*this)(s.right());
        if (r) out = Sentence::conj(*l, *r);
        break;
      }
    }
    memo_.emplace(s.id(), std::make_pair(s, out));
    return out;
  }

  const Morphism& morphism() const { return phi_; }

 private:
  Morphism phi_;
  std::unordered_map<const void*, std::pair<Sentence, std::optional<Sentence>>> memo_;
};

/// Enumerate every function source -> target, in lexicographic order of the
/// image tuple (source symbols sorted).
inline std::vector<Morphism> enumerate_morphisms(const Signature& source, const Signature& target,
                                                 std::size_t cap = 2'000'000) {
  std::vector<Morphism> out;
  if (target.empty() && !source.empty()) return out;
  std::vector<Symbol> src(source.symbols.begin(), source.symbols.end());
  std::vector<Symbol> tgt(target.symbols.begin(), target.symbols.end());
  std::vector<std::size_t> digits(src.size(), 0);
  while (true) {
    if (out.size() >= cap) throw ResourceError("morphism enumeration exceeds cap");
    Morphism m{source, target, {}};
    for (std::size_t i = 0; i < src.size(); ++i) m.map.emplace(src[i], tgt[digits[i]]);
    out.push_back(std::move(m));
    std::size_t pos = src.size();
    while (pos > 0) {
      --pos;
      if (++digits[pos] < tgt.size()) break;
      digits[pos] = 0;
      if (pos == 0) return out;
    }
    if (src.empty()) return out;
  }
}

/// All subsets of `sig`, in canonical (index) order.
inline std::vector<Signature> subobjects(const Signature& sig) {
  std::vector<Signature> out;
  for (const auto& m : enumerate_models(sig)) out.push_back(Signature(m.truths));
  return out;
}

// ---------------------------------------------------------------------------
// The SET inclusion system

class Sets {
 public:
  using Object = Signature;
  using Morphism = pl::Morphism;

  std::string name() const { return "set"; }

  const Signature& source(const Morphism& m) const { return m.source; }
  const Signature& target(const Morphism& m) const { return m.target; }
  Morphism identity(const Signature& s) const { return pl::identity(s); }
  Morphism compose(const Morphism& f, const Morphism& g) const { return pl::compose(f, g); }
  void validate(const Morphism& m) const { pl::validate(m); }

  bool is_inclusion(const Morphism& m) const {
    if (!m.target.includes(m.source)) return false;
    for (const auto& [k, v] : m.map)
      if (k != v) return false;
    return true;
  }

  bool is_surjection(const Morphism& m) const {
    std::set<Symbol> image;
    for (const auto& [k, v] : m.map) image.insert(v);
    return image == m.target.symbols;
  }

  std::optional<Morphism> inclusion(const Signature& sub, const Signature& super) const {
    if (!super.includes(sub)) return std::nullopt;
    Morphism m{sub, super, {}};
    for (const auto& s : sub.symbols) m.map.emplace(s, s);
    return m;
  }

  Factorization<Morphism> factorize(const Morphism& f) const {
    pl::validate(f);
    Signature image;
    for (const auto& [k, v] : f.map) image.symbols.insert(v);
    Morphism e{f.source, image, f.map};
    return {std::move(e), *inclusion(image, f.target)};
  }

  PullbackSquare<Morphism> pullback(const Morphism& f, const Morphism& incl) const {
    Signature restricted;
    for (const auto& [k, v] : f.map)
      if (incl.source.contains(v)) restricted.symbols.insert(k);
    Morphism bottom{restricted, incl.source, {}};
    for (const auto& s : restricted.symbols) bottom.map.emplace(s, f(s));
    return {f, incl, std::move(bottom), *inclusion(restricted, f.source)};
  }

  /// Pushout as the quotient of the tagged disjoint union Σ1 + Σ2 by the
  /// equivalence generated by f1(c) ~ f2(c). Each apex symbol is named by the
  /// least plain name in its class; clashes get "_2", "_3", ... suffixes.
  Cocone<Morphism> pushout(const Morphism& f1, const Morphism& f2) const {
    detail::SymbolQuotient q;
    std::map<Symbol, std::size_t> left, right;
    for (const auto& s : f1.target.symbols) left.emplace(s, q.add(s));
    for (const auto& s : f2.target.symbols) right.emplace(s, q.add(s));
    for (const auto& c : f1.source.symbols) q.unite(left.at(f1(c)), right.at(f2(c)));
    auto cls = q.class_of();
    std::size_t classes = 0;
    for (auto c : cls) classes = std::max(classes, c + 1);
    auto names = q.class_names(std::vector<std::string>(classes));
    Signature apex;
    for (const auto& n : names) apex.symbols.insert(n);
    Morphism g1{f1.target, apex, {}}, g2{f2.target, apex, {}};
    for (const auto& [s, idx] : left) g1.map.emplace(s, names[cls[idx]]);
    for (const auto& [s, idx] : right) g2.map.emplace(s, names[cls[idx]]);
    return {f1, f2, std::move(g1), std::move(g2)};
  }

  /// Least sub-object of `ambient` containing both arguments.
  Signature join(const Signature& a, const Signature& b, const Signature& ambient) const {
    Signature u = a;
    u.symbols.insert(b.symbols.begin(), b.symbols.end());
    if (!ambient.includes(u)) throw ContractError("join escapes the ambient signature");
    return u;
  }
};

// ---------------------------------------------------------------------------
// Truth tables

/// Bit vector over the canonical model order of a signature. Tables of up
/// to 64 rows live inline.
class TruthTable {
 public:
  TruthTable() = default;
  explicit TruthTable(std::size_t bits) : bits_(bits) {
    if (bits > 64) heap_.assign((bits + 63) / 64, 0);
  }

  std::size_t size() const { return bits_; }
  bool test(std::size_t i) const { return (data()[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i) { data()[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  /// Rows 64i .. 64i+63 as one word.
  std::uint64_t word(std::size_t i) const { return i < words() ? data()[i] : 0; }

  TruthTable operator&(const TruthTable& o) const {
    TruthTable t(bits_);
    for (std::size_t i = 0; i < words(); ++i) t.data()[i] = data()[i] & o.data()[i];
    return t;
  }
  TruthTable operator|(const TruthTable& o) const {
    TruthTable t(bits_);
    for (std::size_t i = 0; i < words(); ++i) t.data()[i] = data()[i] | o.data()[i];
    return t;
  }
  TruthTable operator~() const {
    TruthTable t(bits_);
    for (std::size_t i = 0; i < words(); ++i) t.data()[i] = ~data()[i];
    t.trim();
    return t;
  }
  bool subset_of(const TruthTable& o) const {
    for (std::size_t i = 0; i < words(); ++i)
      if (data()[i] & ~o.data()[i]) return false;
    return true;
  }
  bool none() const {
    for (std::size_t i = 0; i < words(); ++i)
      if (data()[i] != 0) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < words(); ++i) n += static_cast<std::size_t>(std::popcount(data()[i]));
    return n;
  }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;
  friend auto operator<=>(const TruthTable&, const TruthTable&) = default;

 private:
  std::size_t words() const { return bits_ > 64 ? heap_.size() : (bits_ > 0 ? 1 : 0); }
  std::uint64_t* data() { return bits_ > 64 ? heap_.data() : &small_; }
  const std::uint64_t* data() const { return bits_ > 64 ? heap_.data() : &small_; }
  void trim() {
    if (bits_ % 64 != 0 && words() > 0) data()[words() - 1] &= (std::uint64_t{1} << (bits_ % 64)) - 1;
  }

  std::size_t bits_ = 0;
  std::uint64_t small_ = 0;
  std::vector<std::uint64_t> heap_;
};

/// Truth tables of sentences over one signature, memoized on shared nodes.
/// Bit i of a table is the sentence's value in model_at(sig, i).
class TableEvaluator {
 public:
  explicit TableEvaluator(Signature sig, const Bounds& bounds = {})
      : sig_(std::move(sig)), models_(pl::model_count(sig_, bounds)) {}

  const Signature& signature() const { return sig_; }
  std::size_t model_count() const { return models_; }

  const TruthTable& operator()(const Sentence& s) {
    auto it = memo_.find(s.id());
    if (it != memo_.end()) return it->second.second;
    TruthTable t;
    switch (s.kind()) {
      case Sentence::Kind::Var: {
        auto bit = sig_.index_of(s.symbol());
        t = TruthTable(models_);
        for (std::size_t i = 0; i < models_; ++i)
          if ((i >> bit) & 1U) t.set(i);
        break;
      }
      case Sentence::Kind::Not:
        t = ~(*this)(s.inner());
        break;
      case Sentence::Kind::And: {
        TruthTable l = (*this)(s.left());
        t = l & (*this)(s.right());
        break;
      }
    }
    return memo_.emplace(s.id(), std::make_pair(s, std::move(t))).first->second.second;
  }

 private:
  Signature sig_;
  std::size_t models_;
  std::unordered_map<const void*, std::pair<Sentence, TruthTable>> memo_;
};

/// Table of the set of models in `models` (all over `sig`).
inline TruthTable table_of_models(const Signature& sig, const std::vector<Model>& models, const Bounds& bounds = {}) {
  TruthTable t(model_count(sig, bounds));
  for (const auto& m : models) t.set(model_index(m));
  return t;
}

// ---------------------------------------------------------------------------
// Syntactic slices

inline std::size_t slice_size(std::size_t symbols, int depth, std::size_t cap) {
  if (symbols == 0) return 0;
  std::size_t s = symbols;
  for (int d = 1; d <= depth; ++d) {
    if (s > cap) return cap + 1;
    std::size_t next = symbols + s + s * s;
    if (next > cap) return cap + 1;
    s = next;
  }
  return s;
}

/// Every sentence of depth <= `depth` over `sig`: symbols first, then
/// negations, then conjunctions in lexicographic pair order. Depth of a
/// symbol is 0. Subterms are shared with the previous layer.
inline std::vector<Sentence> sentences_up_to_depth(const Signature& sig, int depth, const Bounds& bounds = {}) {
  if (depth < 0) throw ContractError("sentence depth must be non-negative");
  if (slice_size(sig.size(), depth, bounds.enumeration_cap) > bounds.enumeration_cap)
    throw ResourceError("sentence slice of depth " + std::to_string(depth) + " over " + std::to_string(sig.size()) +
                        " symbols exceeds cap");
  std::vector<Sentence> layer;
  for (const auto& s : sig.symbols) layer.push_back(Sentence::var(s));
  std::vector<Sentence> atoms = layer;
  for (int d = 1; d <= depth; ++d) {
    std::vector<Sentence> next = atoms;
    next.reserve(atoms.size() + layer.size() + layer.size() * layer.size());
    for (const auto& s : layer) next.push_back(Sentence::neg(s));
    for (const auto& a : layer)
      for (const auto& b : layer) next.push_back(Sentence::conj(a, b));
    layer = std::move(next);
  }
  return layer;
}

/// One sentence per distinct truth table occurring in the depth-`depth`
/// slice: the earliest one in grammar-unfolding order. A conjunction's table
/// depends only on its children's tables, so closing the representatives
/// layer by layer reaches exactly the tables of the full slice.
inline std::vector<Sentence> sentence_representatives(const Signature& sig, int depth, const Bounds& bounds = {}) {
  if (depth < 0) throw ContractError("sentence depth must be non-negative");
  std::vector<Sentence> reps;
  if (sig.size() <= 6) {
    // tables fit in one word
    const std::uint64_t rows = std::uint64_t{1} << sig.size();
    const std::uint64_t mask = rows == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows) - 1;
    std::unordered_map<std::uint64_t, std::size_t> seen;
    std::vector<std::uint64_t> tables;
    auto offer = [&](std::uint64_t t, auto&& make) {
      if (seen.emplace(t, reps.size()).second) {
        reps.push_back(make());
        tables.push_back(t);
      }
    };
    std::size_t bit = 0;
    for (const auto& s : sig.symbols) {
      std::uint64_t t = 0;
      for (std::uint64_t j = 0; j < rows; ++j)
        if ((j >> bit) & 1U) t |= std::uint64_t{1} << j;
      offer(t, [&] { return Sentence::var(s); });
      ++bit;
    }
    for (int d = 1; d <= depth; ++d) {
      const std::size_t prev = reps.size();
      if (prev * prev > bounds.enumeration_cap * 64) throw ResourceError("representative slice exceeds cap");
      for (std::size_t i = 0; i < prev; ++i) offer(~tables[i] & mask, [&] { return Sentence::neg(reps[i]); });
      for (std::size_t i = 0; i < prev; ++i)
        for (std::size_t j = 0; j < prev; ++j)
          offer(tables[i] & tables[j], [&] { return Sentence::conj(reps[i], reps[j]); });
    }
    return reps;
  }
  TableEvaluator eval(sig, bounds);
  std::map<TruthTable, std::size_t> seen;
  auto offer = [&](const Sentence& s) {
    if (seen.emplace(eval(s), reps.size()).second) reps.push_back(s);
  };
  for (const auto& s : sig.symbols) offer(Sentence::var(s));
  for (int d = 1; d <= depth; ++d) {
    std::vector<Sentence> prev = reps;
    if (prev.size() * prev.size() > bounds.enumeration_cap) throw ResourceError("representative slice exceeds cap");
    for (const auto& s : prev) offer(Sentence::neg(s));
    for (const auto& a : prev)
      for (const auto& b : prev) offer(Sentence::conj(a, b));
  }
  return reps;
}

// ---------------------------------------------------------------------------
// The institution

/// PL as a base institution: SET signatures plus sentences, models and
/// satisfaction. Model enumeration ignores carrier bounds.
class Institution : public Sets {
 public:
  using Sentence = pl::Sentence;
  using Model = pl::Model;

  std::string logic() const { return "pl"; }

  Sentence translate(const Morphism& phi, const Sentence& s) const { return pl::translate(phi, s); }
  Model reduct(const Morphism& phi, const Model& m) const { return pl::reduct(phi, m); }
  bool satisfies(const Model& m, const Sentence& s) const { return pl::satisfies(m, s); }
  bool sentence_over(const Signature& sig, const Sentence& s) const { return pl::sentence_over(sig, s); }
  std::vector<Model> enumerate_models(const Signature& sig, const Bounds& b) const {
    return pl::enumerate_models(sig, b);
  }
  const Signature& signature_of(const Model& m) const { return m.signature; }
  /// Models over `sig` that agree with `base` on base's signature, in
  /// canonical order.
  std::vector<Model> extensions(const Signature& sig, const Model& base, const Bounds& b) const {
    if (!sig.includes(base.signature)) throw ContractError("extension of a model over a foreign signature");
    std::vector<Model> out;
    for (std::uint64_t i = 0, n = model_count(sig, b); i < n; ++i) {
      Model m = model_at(sig, i);
      bool agrees = true;
      for (const auto& s : base.signature.symbols)
        if (m.holds(s) != base.holds(s)) {
          agrees = false;
          break;
        }
      if (agrees) out.push_back(std::move(m));
    }
    return out;
  }
  /// Sen(∅) = ∅: the grammar has no closed base case.
  bool has_no_sentences(const Signature& sig) const { return sig.empty(); }
  /// PL entailment over a finite signature is decided exactly.
  bool exact_semantics() const { return true; }

  /// Amalgamation along a cocone: each apex symbol takes its value from any
  /// preimage. Empty when preimages disagree or an apex symbol has none.
  std::optional<Model> amalgamate(const Cocone<Morphism>& k, const Model& left, const Model& right) const {
    Model out{k.left_leg.target, {}};
    std::map<Symbol, bool> value;
    auto put = [&](const Symbol& apex_sym, bool v) {
      auto [it, inserted] = value.emplace(apex_sym, v);
      return inserted || it->second == v;
    };
    for (const auto& [s, img] : k.left_leg.map)
      if (!put(img, left.holds(s))) return std::nullopt;
    for (const auto& [s, img] : k.right_leg.map)
      if (!put(img, right.holds(s))) return std::nullopt;
    for (const auto& s : out.signature.symbols) {
      auto it = value.find(s);
      if (it == value.end()) return std::nullopt;
      if (it->second) out.truths.insert(s);
    }
    return out;
  }
};

}  // namespace blendkit::pl
