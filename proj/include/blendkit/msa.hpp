#pragma once

// Many-sorted algebra: signatures (S, F) with ranked operation symbols,
// first-order sentences over equational atoms, finite algebras with carriers
// {0..n-1}, and the closed / strong / nearly-strong inclusion systems on the
// category of signatures.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "blendkit/config.hpp"
#include "blendkit/detail/quotient.hpp"
#include "blendkit/error.hpp"
#include "blendkit/inclusion.hpp"

namespace blendkit::msa {

using Sort = std::string;

/// An operation symbol is identified by its name together with its rank, so
/// the same name may be overloaded at different ranks.
struct OpDecl {
  std::string name;
  std::vector<Sort> args;
  Sort result;

  friend auto operator<=>(const OpDecl&, const OpDecl&) = default;
  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

inline std::string rank_string(const std::vector<Sort>& args, const Sort& result) {
  std::string out;
  for (const auto& a : args) out += a + " ";
  return out + "-> " + result;
}

inline std::ostream& operator<<(std::ostream& os, const OpDecl& op) {
  return os << op.name << " : " << rank_string(op.args, op.result);
}

struct Signature {
  std::set<Sort> sorts;
  std::set<OpDecl> ops;

  bool has_sort(const Sort& s) const { return sorts.count(s) != 0; }
  bool has_op(const OpDecl& op) const { return ops.count(op) != 0; }
  bool rank_within(const OpDecl& op) const {
    if (!has_sort(op.result)) return false;
    return std::all_of(op.args.begin(), op.args.end(), [&](const Sort& s) { return has_sort(s); });
  }
  /// Ops called `name` with the given argument sorts.
  std::vector<OpDecl> lookup(const std::string& name, const std::vector<Sort>& args) const {
    std::vector<OpDecl> out;
    for (const auto& op : ops)
      if (op.name == name && op.args == args) out.push_back(op);
    return out;
  }
  std::size_t symbol_count() const { return sorts.size() + ops.size(); }

  friend auto operator<=>(const Signature&, const Signature&) = default;
  friend bool operator==(const Signature&, const Signature&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Signature& sig) {
  os << "sorts {";
  bool first = true;
  for (const auto& s : sig.sorts) {
    os << (first ? "" : ", ") << s;
    first = false;
  }
  os << "} ops {";
  first = true;
  for (const auto& op : sig.ops) {
    os << (first ? " " : "; ") << op;
    first = false;
  }
  return os << (sig.ops.empty() ? "}" : " }");
}

inline void validate(const Signature& sig) {
  for (const auto& op : sig.ops)
    if (!sig.rank_within(op)) throw ValidationError("operation '" + op.name + "' uses a sort outside the signature");
}

/// Sort map plus one op map per rank; ops keep their name-only image, the
/// image rank being the sort map applied to the source rank.
struct Morphism {
  Signature source;
  Signature target;
  std::map<Sort, Sort> sorts;
  std::map<OpDecl, std::string> ops;

  const Sort& sort(const Sort& s) const {
    auto it = sorts.find(s);
    if (it == sorts.end()) throw ValidationError("morphism undefined on sort '" + s + "'");
    return it->second;
  }
  std::vector<Sort> sorts_of(const std::vector<Sort>& w) const {
    std::vector<Sort> out;
    out.reserve(w.size());
    for (const auto& s : w) out.push_back(sort(s));
    return out;
  }
  OpDecl op(const OpDecl& o) const {
    auto it = ops.find(o);
    if (it == ops.end()) throw ValidationError("morphism undefined on operation '" + o.name + "'");
    return OpDecl{it->second, sorts_of(o.args), sort(o.result)};
  }

  friend auto operator<=>(const Morphism&, const Morphism&) = default;
  friend bool operator==(const Morphism&, const Morphism&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Morphism& m) {
  os << "sorts {";
  bool first = true;
  for (const auto& [k, v] : m.sorts) {
    os << (first ? " " : ", ") << k << " |-> " << v;
    first = false;
  }
  os << " } ops {";
  first = true;
  for (const auto& [k, v] : m.ops) {
    os << (first ? " " : ", ") << k.name << " : " << rank_string(k.args, k.result) << " |-> " << v;
    first = false;
  }
  return os << " }";
}

inline void validate(const Morphism& m) {
  for (const auto& s : m.source.sorts) {
    auto it = m.sorts.find(s);
    if (it == m.sorts.end()) throw ValidationError("morphism does not map sort '" + s + "'");
    if (!m.target.has_sort(it->second)) throw ValidationError("sort image '" + it->second + "' outside the target");
  }
  if (m.sorts.size() != m.source.sorts.size()) throw ValidationError("morphism maps sorts outside its source");
  for (const auto& op : m.source.ops) {
    if (!m.ops.count(op)) throw ValidationError("morphism does not map operation '" + op.name + "'");
    if (!m.target.has_op(m.op(op)))
      throw ValidationError("operation '" + op.name + "' maps to '" + m.ops.at(op) + "' with no such rank in the target");
  }
  if (m.ops.size() != m.source.ops.size()) throw ValidationError("morphism maps operations outside its source");
}

inline Morphism identity(const Signature& sig) {
  Morphism m{sig, sig, {}, {}};
  for (const auto& s : sig.sorts) m.sorts.emplace(s, s);
  for (const auto& op : sig.ops) m.ops.emplace(op, op.name);
  return m;
}

inline Morphism compose(const Morphism& f, const Morphism& g) {
  if (!(f.target == g.source)) throw ContractError("composition of non-composable MSA morphisms");
  Morphism h{f.source, g.target, {}, {}};
  for (const auto& [s, img] : f.sorts) h.sorts.emplace(s, g.sort(img));
  for (const auto& [op, img] : f.ops) h.ops.emplace(op, g.ops.at(f.op(op)));
  return h;
}

/// Sub-signature built from a sort set and an op set, with identity maps.
inline Morphism structural_inclusion(const Signature& sub, const Signature& super) {
  Morphism m{sub, super, {}, {}};
  for (const auto& s : sub.sorts) m.sorts.emplace(s, s);
  for (const auto& op : sub.ops) m.ops.emplace(op, op.name);
  return m;
}

// ---------------------------------------------------------------------------
// Terms and sentences

struct Variable {
  std::string name;
  Sort sort;

  friend auto operator<=>(const Variable&, const Variable&) = default;
  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Term {
  enum class Kind { Op, Var };
  Kind kind = Kind::Var;
  OpDecl op;     // Kind::Op
  Variable var;  // Kind::Var
  std::vector<Term> args;

  static Term apply(OpDecl op, std::vector<Term> args = {}) {
    Term t;
    t.kind = Kind::Op;
    t.op = std::move(op);
    t.args = std::move(args);
    return t;
  }
  static Term variable(std::string name, Sort sort) {
    Term t;
    t.kind = Kind::Var;
    t.var = Variable{std::move(name), std::move(sort)};
    return t;
  }

  const Sort& sort() const { return kind == Kind::Op ? op.result : var.sort; }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Sentence {
  enum class Kind { Eq, And, Or, Implies, Not, Forall, Exists };
  Kind kind = Kind::Eq;
  Term lhs;
  Term rhs;
  std::vector<Sentence> sub;
  std::vector<Variable> vars;

  static Sentence eq(Term l, Term r) {
    Sentence s;
    s.kind = Kind::Eq;
    s.lhs = std::move(l);
    s.rhs = std::move(r);
    return s;
  }
  static Sentence binary(Kind k, Sentence l, Sentence r) {
    Sentence s;
    s.kind = k;
    s.sub = {std::move(l), std::move(r)};
    return s;
  }
  static Sentence conj(Sentence l, Sentence r) { return binary(Kind::And, std::move(l), std::move(r)); }
  static Sentence disj(Sentence l, Sentence r) { return binary(Kind::Or, std::move(l), std::move(r)); }
  static Sentence implies(Sentence l, Sentence r) { return binary(Kind::Implies, std::move(l), std::move(r)); }
  static Sentence neg(Sentence inner) {
    Sentence s;
    s.kind = Kind::Not;
    s.sub = {std::move(inner)};
    return s;
  }
  static Sentence quantified(Kind k, std::vector<Variable> vars, Sentence body) {
    Sentence s;
    s.kind = k;
    s.vars = std::move(vars);
    s.sub = {std::move(body)};
    return s;
  }
  static Sentence forall(std::vector<Variable> vars, Sentence body) {
    return quantified(Kind::Forall, std::move(vars), std::move(body));
  }
  static Sentence exists(std::vector<Variable> vars, Sentence body) {
    return quantified(Kind::Exists, std::move(vars), std::move(body));
  }

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& s : sub) d = std::max(d, s.depth() + 1);
    return d;
  }

  friend auto operator<=>(const Sentence&, const Sentence&) = default;
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

namespace detail {

inline bool op_needs_ascription(const OpDecl& op, const Signature* sig) {
  if (!sig) return false;
  return sig->lookup(op.name, op.args).size() > 1;
}

}  // namespace detail

/// Concrete syntax: `f(x, c)`, `x`, `c`; an op overloaded on its result sort
/// within `sig` is written with an ascription `c:s`.
inline void write_term(std::ostream& os, const Term& t, const Signature* sig = nullptr) {
  if (t.kind == Term::Kind::Var) {
    os << t.var.name;
    return;
  }
  os << t.op.name;
  if (!t.args.empty()) {
    os << '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) os << ", ";
      write_term(os, t.args[i], sig);
    }
    os << ')';
  }
  if (detail::op_needs_ascription(t.op, sig)) os << ':' << t.op.result;
}

inline void write_sentence(std::ostream& os, const Sentence& s, const Signature* sig = nullptr) {
  using K = Sentence::Kind;
  switch (s.kind) {
    case K::Eq:
      write_term(os, s.lhs, sig);
      os << " = ";
      write_term(os, s.rhs, sig);
      return;
    case K::Not:
      os << '!';
      if (s.sub[0].kind == K::Eq || s.sub[0].kind == K::Forall || s.sub[0].kind == K::Exists) {
        os << '(';
        write_sentence(os, s.sub[0], sig);
        os << ')';
      } else {
        write_sentence(os, s.sub[0], sig);
      }
      return;
    case K::And:
    case K::Or:
    case K::Implies:
      os << '(';
      write_sentence(os, s.sub[0], sig);
      os << (s.kind == K::And ? " & " : s.kind == K::Or ? " | " : " -> ");
      write_sentence(os, s.sub[1], sig);
      os << ')';
      return;
    case K::Forall:
    case K::Exists:
      os << '(' << (s.kind == K::Forall ? "forall " : "exists ");
      for (std::size_t i = 0; i < s.vars.size(); ++i) os << (i ? ", " : "") << s.vars[i].name << ':' << s.vars[i].sort;
      os << " . ";
      write_sentence(os, s.sub[0], sig);
      os << ')';
      return;
  }
}

inline std::string to_string(const Sentence& s, const Signature* sig = nullptr) {
  std::ostringstream os;
  write_sentence(os, s, sig);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Sentence& s) {
  write_sentence(os, s);
  return os;
}

namespace detail {

inline bool term_over(const Signature& sig, const Term& t, const std::set<Variable>& bound) {
  if (t.kind == Term::Kind::Var) return bound.count(t.var) != 0 && sig.has_sort(t.var.sort);
  if (!sig.has_op(t.op) || t.args.size() != t.op.args.size()) return false;
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (t.args[i].sort() != t.op.args[i] || !term_over(sig, t.args[i], bound)) return false;
  return true;
}

inline bool sentence_over(const Signature& sig, const Sentence& s, std::set<Variable>& bound) {
  using K = Sentence::Kind;
  switch (s.kind) {
    case K::Eq:
      return s.lhs.sort() == s.rhs.sort() && term_over(sig, s.lhs, bound) && term_over(sig, s.rhs, bound);
    case K::Not:
    case K::And:
    case K::Or:
    case K::Implies:
      return std::all_of(s.sub.begin(), s.sub.end(), [&](const Sentence& c) { return sentence_over(sig, c, bound); });
    case K::Forall:
    case K::Exists: {
      std::vector<Variable> added;
      for (const auto& v : s.vars) {
        if (!sig.has_sort(v.sort)) {
          for (const auto& a : added) bound.erase(a);
          return false;
        }
        if (bound.insert(v).second) added.push_back(v);
      }
      bool ok = sentence_over(sig, s.sub[0], bound);
      for (const auto& a : added) bound.erase(a);
      return ok;
    }
  }
  return false;
}

}  // namespace detail

/// True iff `s` is a closed, well-sorted sentence over `sig`.
inline bool sentence_over(const Signature& sig, const Sentence& s) {
  std::set<Variable> bound;
  return detail::sentence_over(sig, s, bound);
}

inline void typecheck(const Signature& sig, const Sentence& s) {
  if (!sentence_over(sig, s)) throw ValidationError("sentence " + to_string(s) + " is not a closed sentence over the signature");
}

inline Term translate(const Morphism& phi, const Term& t) {
  if (t.kind == Term::Kind::Var) return Term::variable(t.var.name, phi.sort(t.var.sort));
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(translate(phi, a));
  return Term::apply(phi.op(t.op), std::move(args));
}

/// Renames sort and op symbols; variable names are kept, their sorts are
/// mapped.
inline Sentence translate(const Morphism& phi, const Sentence& s) {
  Sentence out;
  out.kind = s.kind;
  if (s.kind == Sentence::Kind::Eq) {
    out.lhs = translate(phi, s.lhs);
    out.rhs = translate(phi, s.rhs);
  }
  for (const auto& v : s.vars) out.vars.push_back(Variable{v.name, phi.sort(v.sort)});
  for (const auto& c : s.sub) out.sub.push_back(translate(phi, c));
  return out;
}

inline Sentence checked_translate(const Morphism& phi, const Sentence& s) {
  typecheck(phi.source, s);
  return translate(phi, s);
}

// ---------------------------------------------------------------------------
// Algebras

/// Finite algebra: carrier of sort s is {0 .. carriers[s]-1}; the table of
/// op: s1..sn -> s lists results in mixed-radix order of the argument tuple,
/// first argument most significant.
struct Algebra {
  Signature signature;
  std::map<Sort, int> carriers;
  std::map<OpDecl, std::vector<int>> tables;

  int carrier(const Sort& s) const {
    auto it = carriers.find(s);
    if (it == carriers.end()) throw ValidationError("algebra has no carrier for sort '" + s + "'");
    return it->second;
  }

  std::size_t table_size(const OpDecl& op) const {
    std::size_t n = 1;
    for (const auto& a : op.args) n *= static_cast<std::size_t>(carrier(a));
    return n;
  }

  int apply(const OpDecl& op, const std::vector<int>& args) const {
    std::size_t index = 0;
    for (std::size_t i = 0; i < args.size(); ++i)
      index = index * static_cast<std::size_t>(carrier(op.args[i])) + static_cast<std::size_t>(args[i]);
    return tables.at(op).at(index);
  }

  friend auto operator<=>(const Algebra&, const Algebra&) = default;
  friend bool operator==(const Algebra&, const Algebra&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Algebra& a) {
  os << '{';
  bool first = true;
  for (const auto& [s, n] : a.carriers) {
    os << (first ? " " : "; ") << "carrier " << s << " = " << n;
    first = false;
  }
  for (const auto& [op, table] : a.tables) {
    os << (first ? " " : "; ") << op.name << " : " << rank_string(op.args, op.result) << " = [";
    for (std::size_t i = 0; i < table.size(); ++i) os << (i ? ", " : "") << table[i];
    os << ']';
    first = false;
  }
  return os << (first ? "}" : " }");
}

inline void validate(const Algebra& a) {
  for (const auto& s : a.signature.sorts)
    if (a.carrier(s) < 0) throw ValidationError("negative carrier size for sort '" + s + "'");
  if (a.carriers.size() != a.signature.sorts.size()) throw ValidationError("algebra has carriers for unknown sorts");
  for (const auto& op : a.signature.ops) {
    auto it = a.tables.find(op);
    if (it == a.tables.end()) throw ValidationError("algebra has no table for '" + op.name + "'");
    if (it->second.size() != a.table_size(op)) throw ValidationError("table of '" + op.name + "' is not total");
    for (int v : it->second)
      if (v < 0 || v >= a.carrier(op.result)) throw ValidationError("table of '" + op.name + "' leaves its result carrier");
  }
  if (a.tables.size() != a.signature.ops.size()) throw ValidationError("algebra has tables for unknown operations");
}

/// Advances a mixed-radix counter, last digit fastest; false after wrapping.
inline bool next_tuple(std::vector<int>& digits, const std::vector<int>& radix) {
  std::size_t pos = digits.size();
  while (pos > 0) {
    --pos;
    if (++digits[pos] < radix[pos]) return true;
    digits[pos] = 0;
  }
  return false;
}

using Valuation = std::map<Variable, int>;

/// Evaluates `t`; variables are looked up in `env`.
inline int eval(const Algebra& m, const Term& t, const Valuation& env) {
  if (t.kind == Term::Kind::Var) {
    auto it = env.find(t.var);
    if (it == env.end()) throw ContractError("free variable '" + t.var.name + "' in evaluated term");
    return it->second;
  }
  std::vector<int> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(eval(m, a, env));
  return m.apply(t.op, args);
}

/// Ground-term evaluation.
inline int term_eval(const Algebra& m, const Term& t) { return eval(m, t, {}); }

/// Signature Σ+X: Σ with one fresh constant per variable of X.
struct SignatureExtension {
  Signature base;
  std::vector<Variable> variables;
  Signature extended;

  /// Constant standing for `v` in the extended signature.
  static OpDecl constant_for(const Variable& v) { return OpDecl{"$" + v.name, {}, v.sort}; }
};

inline SignatureExtension extend_signature(const Signature& sig, const std::vector<Variable>& vars) {
  SignatureExtension ext{sig, vars, sig};
  for (const auto& v : vars) {
    if (!sig.has_sort(v.sort)) throw ValidationError("variable '" + v.name + "' has a sort outside the signature");
    ext.extended.ops.insert(SignatureExtension::constant_for(v));
  }
  return ext;
}

/// Every expansion of `m` to Σ+X, i.e. every interpretation of the fresh
/// constants, in lexicographic order of the chosen values.
inline std::vector<Algebra> expansions(const Algebra& m, const SignatureExtension& ext) {
  std::vector<Algebra> out;
  std::vector<int> choice(ext.variables.size(), 0);
  for (const auto& v : ext.variables)
    if (m.carrier(v.sort) == 0) return out;
  while (true) {
    Algebra a = m;
    a.signature = ext.extended;
    for (std::size_t i = 0; i < choice.size(); ++i)
      a.tables[SignatureExtension::constant_for(ext.variables[i])] = {choice[i]};
    out.push_back(std::move(a));
    std::size_t pos = choice.size();
    while (pos > 0) {
      --pos;
      if (++choice[pos] < m.carrier(ext.variables[pos].sort)) break;
      choice[pos] = 0;
      if (pos == 0) return out;
    }
    if (choice.empty()) return out;
  }
}

namespace detail {

/// Tarskian satisfaction. A quantifier ranges over all expansions of the
/// current algebra by its variables; an expansion is represented by the
/// valuation it adds, which is what the fresh constants would evaluate to.
inline bool holds(const Algebra& m, const Sentence& s, Valuation& env) {
  using K = Sentence::Kind;
  switch (s.kind) {
    case K::Eq:
      return eval(m, s.lhs, env) == eval(m, s.rhs, env);
    case K::Not:
      return !holds(m, s.sub[0], env);
    case K::And:
      return holds(m, s.sub[0], env) && holds(m, s.sub[1], env);
    case K::Or:
      return holds(m, s.sub[0], env) || holds(m, s.sub[1], env);
    case K::Implies:
      return !holds(m, s.sub[0], env) || holds(m, s.sub[1], env);
    case K::Forall:
    case K::Exists: {
      const bool universal = s.kind == K::Forall;
      Valuation saved = env;
      std::vector<int> choice(s.vars.size(), 0);
      bool empty = false;
      for (const auto& v : s.vars)
        if (m.carrier(v.sort) == 0) empty = true;
      if (empty) return universal;
      bool result = universal;
      while (true) {
        for (std::size_t i = 0; i < s.vars.size(); ++i) env[s.vars[i]] = choice[i];
        bool r = holds(m, s.sub[0], env);
        if (universal && !r) {
          result = false;
          break;
        }
        if (!universal && r) {
          result = true;
          break;
        }
        std::size_t pos = choice.size();
        bool done = choice.empty();
        while (pos > 0) {
          --pos;
          if (++choice[pos] < m.carrier(s.vars[pos].sort)) break;
          choice[pos] = 0;
          if (pos == 0) done = true;
        }
        if (done) break;
      }
      env = std::move(saved);
      return result;
    }
  }
  return false;
}

}  // namespace detail

inline bool satisfies(const Algebra& m, const Sentence& s) {
  typecheck(m.signature, s);
  Valuation env;
  return detail::holds(m, s, env);
}

/// Each source symbol is interpreted as its image is interpreted in `m`.
inline Algebra reduct(const Morphism& phi, const Algebra& m) {
  if (!(m.signature == phi.target)) throw ContractError("reduct of an algebra over the wrong signature");
  Algebra out{phi.source, {}, {}};
  for (const auto& s : phi.source.sorts) out.carriers.emplace(s, m.carrier(phi.sort(s)));
  for (const auto& op : phi.source.ops) out.tables.emplace(op, m.tables.at(phi.op(op)));
  return out;
}

/// Every algebra with carriers of size 0..max_carrier, ordered by the carrier
/// size tuple (sorts in sorted order) and then lexicographically by the
/// concatenated op tables (ops in sorted order).
///
/// With `fixed`, only algebras agreeing with it on its carriers and tables
/// are produced (its carriers may exceed the bound); the relative order is
/// unchanged.
inline std::vector<Algebra> enumerate_algebras(const Signature& sig, int max_carrier, std::size_t cap = 2'000'000,
                                               const Algebra* fixed = nullptr) {
  if (max_carrier < 0) throw ContractError("carrier bound must be non-negative");
  std::vector<Sort> free_sorts;
  std::vector<OpDecl> ops(sig.ops.begin(), sig.ops.end());
  Algebra pinned{sig, {}, {}};
  for (const auto& s : sig.sorts) {
    if (fixed && fixed->carriers.count(s))
      pinned.carriers.emplace(s, fixed->carriers.at(s));
    else
      free_sorts.push_back(s);
  }
  std::vector<Algebra> out;
  std::vector<int> sizes(free_sorts.size(), 0);
  while (true) {
    Algebra base = pinned;
    for (std::size_t i = 0; i < free_sorts.size(); ++i) base.carriers[free_sorts[i]] = sizes[i];
    // one digit per free table entry, radix = result carrier
    std::vector<int> radix;
    std::vector<std::size_t> lengths(ops.size(), 0);
    bool possible = true;
    double count = 1;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (fixed && fixed->tables.count(ops[k])) continue;
      lengths[k] = base.table_size(ops[k]);
      int r = base.carrier(ops[k].result);
      if (lengths[k] > 0 && r == 0) possible = false;
      for (std::size_t j = 0; j < lengths[k]; ++j) {
        radix.push_back(r);
        count *= r;
      }
    }
    if (possible) {
      if (static_cast<double>(out.size()) + count > static_cast<double>(cap))
        throw ResourceError("algebra enumeration exceeds cap of " + std::to_string(cap));
      std::vector<int> digits(radix.size(), 0);
      while (true) {
        Algebra a = base;
        std::size_t c = 0;
        for (std::size_t k = 0; k < ops.size(); ++k) {
          if (fixed && fixed->tables.count(ops[k])) {
            a.tables.emplace(ops[k], fixed->tables.at(ops[k]));
            continue;
          }
          std::vector<int> table(digits.begin() + static_cast<std::ptrdiff_t>(c),
                                 digits.begin() + static_cast<std::ptrdiff_t>(c + lengths[k]));
          a.tables.emplace(ops[k], std::move(table));
          c += lengths[k];
        }
        out.push_back(std::move(a));
        if (!next_tuple(digits, radix)) break;
      }
    }
    if (!next_tuple(sizes, std::vector<int>(sizes.size(), max_carrier + 1))) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inclusion systems on MSA signatures

enum class InclusionKind { Closed, Strong, NearlyStrong };

inline std::string to_string(InclusionKind k) {
  switch (k) {
    case InclusionKind::Closed:
      return "closed";
    case InclusionKind::Strong:
      return "strong";
    case InclusionKind::NearlyStrong:
      return "nearly_strong";
  }
  return "";
}

inline InclusionKind parse_inclusion_kind(const std::string& s) {
  if (s == "closed") return InclusionKind::Closed;
  if (s == "strong") return InclusionKind::Strong;
  if (s == "nearly_strong" || s == "nearly-strong") return InclusionKind::NearlyStrong;
  throw ValidationError("unknown MSA inclusion system '" + s + "'");
}

/// The category of MSA signatures with one of its three non-trivial
/// inclusion systems:
///
///   system         surjections                     inclusions
///   closed         sort map onto                   S ⊆ S', F_{w→s} = F'_{w→s} for ranks over S
///   strong         sort map onto, ops onto         S ⊆ S', F ⊆ F'
///   nearly strong  ops onto                        S = S', F ⊆ F'
class Signatures {
 public:
  using Object = Signature;
  using Morphism = msa::Morphism;

  explicit Signatures(InclusionKind kind = InclusionKind::Strong) : kind_(kind) {}

  InclusionKind kind() const { return kind_; }
  std::string name() const { return "msa-" + to_string(kind_); }

  const Signature& source(const Morphism& m) const { return m.source; }
  const Signature& target(const Morphism& m) const { return m.target; }
  Morphism identity(const Signature& s) const { return msa::identity(s); }
  Morphism compose(const Morphism& f, const Morphism& g) const { return msa::compose(f, g); }
  void validate(const Morphism& m) const {
    msa::validate(m.source);
    msa::validate(m.target);
    msa::validate(m);
  }

  bool is_subsignature(const Signature& sub, const Signature& super) const {
    switch (kind_) {
      case InclusionKind::Strong:
        return contains_sorts(super, sub) && contains_ops(super, sub);
      case InclusionKind::NearlyStrong:
        return sub.sorts == super.sorts && contains_ops(super, sub);
      case InclusionKind::Closed:
        if (!contains_sorts(super, sub) || !contains_ops(super, sub)) return false;
        for (const auto& op : super.ops)
          if (sub.rank_within(op) && !sub.has_op(op)) return false;
        return true;
    }
    return false;
  }

  bool is_inclusion(const Morphism& m) const {
    if (!is_subsignature(m.source, m.target)) return false;
    for (const auto& [k, v] : m.sorts)
      if (k != v) return false;
    for (const auto& [k, v] : m.ops)
      if (k.name != v) return false;
    return true;
  }

  bool is_surjection(const Morphism& m) const {
    switch (kind_) {
      case InclusionKind::Closed:
        return sorts_onto(m);
      case InclusionKind::Strong:
        return sorts_onto(m) && ops_onto(m);
      case InclusionKind::NearlyStrong:
        return ops_onto(m);
    }
    return false;
  }

  std::optional<Morphism> inclusion(const Signature& sub, const Signature& super) const {
    if (!is_subsignature(sub, super)) return std::nullopt;
    return structural_inclusion(sub, super);
  }

  Factorization<Morphism> factorize(const Morphism& f) const {
    msa::validate(f);
    Signature image;
    switch (kind_) {
      case InclusionKind::Strong:
        for (const auto& [s, img] : f.sorts) image.sorts.insert(img);
        for (const auto& op : f.source.ops) image.ops.insert(f.op(op));
        break;
      case InclusionKind::Closed:
        for (const auto& [s, img] : f.sorts) image.sorts.insert(img);
        for (const auto& op : f.target.ops)
          if (image.rank_within(op)) image.ops.insert(op);
        break;
      case InclusionKind::NearlyStrong:
        image.sorts = f.target.sorts;
        for (const auto& op : f.source.ops) image.ops.insert(f.op(op));
        break;
    }
    Morphism e{f.source, image, f.sorts, f.ops};
    return {std::move(e), structural_inclusion(image, f.target)};
  }

  /// Sorts S' = { x ∈ S | φ(x) ∈ S'_1 } and, per rank over S',
  /// F' = { σ ∈ F | φ(σ) ∈ F'_1 }.
  PullbackSquare<Morphism> pullback(const Morphism& f, const Morphism& incl) const {
    const Signature& sub_target = incl.source;
    Signature restricted;
    for (const auto& [s, img] : f.sorts)
      if (sub_target.has_sort(img)) restricted.sorts.insert(s);
    for (const auto& op : f.source.ops)
      if (restricted.rank_within(op) && sub_target.has_op(f.op(op))) restricted.ops.insert(op);
    Morphism bottom{restricted, sub_target, {}, {}};
    for (const auto& s : restricted.sorts) bottom.sorts.emplace(s, f.sorts.at(s));
    for (const auto& op : restricted.ops) bottom.ops.emplace(op, f.ops.at(op));
    return {f, incl, std::move(bottom), structural_inclusion(restricted, f.source)};
  }

  /// Sorts and ops are each quotients of tagged disjoint unions; op classes
  /// are named within their apex rank.
  Cocone<Morphism> pushout(const Morphism& f1, const Morphism& f2) const {
    detail_sorts::Result sorts = quotient_sorts(f1, f2);
    blendkit::detail::SymbolQuotient q;
    std::map<OpDecl, std::size_t> left, right;
    for (const auto& op : f1.target.ops) left.emplace(op, q.add(op.name));
    for (const auto& op : f2.target.ops) right.emplace(op, q.add(op.name));
    for (const auto& op : f1.source.ops) q.unite(left.at(f1.op(op)), right.at(f2.op(op)));
    auto cls = q.class_of();
    std::size_t classes = 0;
    for (auto c : cls) classes = std::max(classes, c + 1);
    std::vector<OpDecl> apex_rank(classes);
    auto rank_in_apex = [&](const OpDecl& op, const std::map<Sort, Sort>& sort_leg) {
      OpDecl r;
      for (const auto& a : op.args) r.args.push_back(sort_leg.at(a));
      r.result = sort_leg.at(op.result);
      return r;
    };
    for (const auto& [op, idx] : left) apex_rank[cls[idx]] = rank_in_apex(op, sorts.left);
    for (const auto& [op, idx] : right) apex_rank[cls[idx]] = rank_in_apex(op, sorts.right);
    std::vector<std::string> groups;
    for (const auto& r : apex_rank) groups.push_back(rank_string(r.args, r.result));
    auto names = q.class_names(groups);

    Signature apex;
    apex.sorts = sorts.apex;
    for (std::size_t c = 0; c < classes; ++c) {
      OpDecl op = apex_rank[c];
      op.name = names[c];
      apex.ops.insert(op);
    }
    Morphism g1{f1.target, apex, sorts.left, {}}, g2{f2.target, apex, sorts.right, {}};
    for (const auto& [op, idx] : left) g1.ops.emplace(op, names[cls[idx]]);
    for (const auto& [op, idx] : right) g2.ops.emplace(op, names[cls[idx]]);
    return {f1, f2, std::move(g1), std::move(g2)};
  }

  /// Least sub-object of `ambient` (in this inclusion system) containing both.
  Signature join(const Signature& a, const Signature& b, const Signature& ambient) const {
    Signature u;
    u.sorts = a.sorts;
    u.sorts.insert(b.sorts.begin(), b.sorts.end());
    switch (kind_) {
      case InclusionKind::Strong:
        u.ops = a.ops;
        u.ops.insert(b.ops.begin(), b.ops.end());
        break;
      case InclusionKind::Closed:
        for (const auto& op : ambient.ops)
          if (u.rank_within(op)) u.ops.insert(op);
        break;
      case InclusionKind::NearlyStrong:
        u.sorts = ambient.sorts;
        u.ops = a.ops;
        u.ops.insert(b.ops.begin(), b.ops.end());
        break;
    }
    if (!is_subsignature(u, ambient)) throw ContractError("join escapes the ambient signature");
    return u;
  }

 private:
  struct detail_sorts {
    struct Result {
      std::set<Sort> apex;
      std::map<Sort, Sort> left;
      std::map<Sort, Sort> right;
    };
  };

  static detail_sorts::Result quotient_sorts(const Morphism& f1, const Morphism& f2) {
    blendkit::detail::SymbolQuotient q;
    std::map<Sort, std::size_t> left, right;
    for (const auto& s : f1.target.sorts) left.emplace(s, q.add(s));
    for (const auto& s : f2.target.sorts) right.emplace(s, q.add(s));
    for (const auto& s : f1.source.sorts) q.unite(left.at(f1.sort(s)), right.at(f2.sort(s)));
    auto cls = q.class_of();
    std::size_t classes = 0;
    for (auto c : cls) classes = std::max(classes, c + 1);
    auto names = q.class_names(std::vector<std::string>(classes));
    detail_sorts::Result r;
    r.apex.insert(names.begin(), names.end());
    for (const auto& [s, idx] : left) r.left.emplace(s, names[cls[idx]]);
    for (const auto& [s, idx] : right) r.right.emplace(s, names[cls[idx]]);
    return r;
  }

  static bool contains_sorts(const Signature& super, const Signature& sub) {
    return std::includes(super.sorts.begin(), super.sorts.end(), sub.sorts.begin(), sub.sorts.end());
  }
  static bool contains_ops(const Signature& super, const Signature& sub) {
    return std::includes(super.ops.begin(), super.ops.end(), sub.ops.begin(), sub.ops.end());
  }
  static bool sorts_onto(const Morphism& m) {
    std::set<Sort> image;
    for (const auto& [k, v] : m.sorts) image.insert(v);
    return image == m.target.sorts;
  }
  /// Every target op is the image of some source op.
  static bool ops_onto(const Morphism& m) {
    std::set<OpDecl> image;
    for (const auto& op : m.source.ops) image.insert(m.op(op));
    return image == m.target.ops;
  }

  InclusionKind kind_;
};

inline Signatures msa_inclusion_system(InclusionKind kind) { return Signatures(kind); }

/// Every sub-object of `sig` in the given inclusion system.
inline std::vector<Signature> subobjects(const Signatures& sys, const Signature& sig) {
  std::vector<Sort> sorts(sig.sorts.begin(), sig.sorts.end());
  std::vector<OpDecl> ops(sig.ops.begin(), sig.ops.end());
  if (sorts.size() + ops.size() > 20) throw ResourceError("sub-object enumeration exceeds cap");
  std::vector<Signature> out;
  for (std::uint64_t sm = 0; sm < (std::uint64_t{1} << sorts.size()); ++sm) {
    Signature base;
    for (std::size_t i = 0; i < sorts.size(); ++i)
      if ((sm >> i) & 1U) base.sorts.insert(sorts[i]);
    for (std::uint64_t om = 0; om < (std::uint64_t{1} << ops.size()); ++om) {
      Signature cand = base;
      bool ok = true;
      for (std::size_t i = 0; i < ops.size() && ok; ++i)
        if ((om >> i) & 1U) {
          if (!cand.rank_within(ops[i])) ok = false;
          cand.ops.insert(ops[i]);
        }
      if (ok && sys.is_subsignature(cand, sig)) out.push_back(std::move(cand));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The institution

/// MSA as a base institution over a chosen inclusion system. Model classes
/// are cut off at Bounds::max_carrier, so every semantic verdict is relative
/// to that bound.
class Institution : public Signatures {
 public:
  using Sentence = msa::Sentence;
  using Model = msa::Algebra;

  explicit Institution(InclusionKind kind = InclusionKind::Strong) : Signatures(kind) {}

  std::string logic() const { return "msa"; }

  Sentence translate(const Morphism& phi, const Sentence& s) const { return checked_translate(phi, s); }
  Model reduct(const Morphism& phi, const Model& m) const { return msa::reduct(phi, m); }
  bool satisfies(const Model& m, const Sentence& s) const { return msa::satisfies(m, s); }
  bool sentence_over(const Signature& sig, const Sentence& s) const { return msa::sentence_over(sig, s); }
  std::vector<Model> enumerate_models(const Signature& sig, const Bounds& b) const {
    return enumerate_algebras(sig, b.max_carrier, b.enumeration_cap);
  }
  const Signature& signature_of(const Model& m) const { return m.signature; }
  /// Algebras over `sig` that agree with `base` on base's signature.
  std::vector<Model> extensions(const Signature& sig, const Model& base, const Bounds& b) const {
    return enumerate_algebras(sig, b.max_carrier, b.enumeration_cap, &base);
  }
  /// Without sorts there are no terms, hence no atoms and no sentences.
  bool has_no_sentences(const Signature& sig) const { return sig.sorts.empty(); }
  bool exact_semantics() const { return false; }

  /// Each apex sort / op takes its carrier / table from any preimage. Empty
  /// when preimages disagree or something in the apex has no preimage.
  std::optional<Model> amalgamate(const Cocone<Morphism>& k, const Model& left, const Model& right) const {
    Model out{k.left_leg.target, {}, {}};
    auto put_sort = [&](const Sort& s, int n) {
      auto [it, inserted] = out.carriers.emplace(s, n);
      return inserted || it->second == n;
    };
    for (const auto& [s, img] : k.left_leg.sorts)
      if (!put_sort(img, left.carrier(s))) return std::nullopt;
    for (const auto& [s, img] : k.right_leg.sorts)
      if (!put_sort(img, right.carrier(s))) return std::nullopt;
    auto put_op = [&](const OpDecl& op, const std::vector<int>& table) {
      auto [it, inserted] = out.tables.emplace(op, table);
      return inserted || it->second == table;
    };
    for (const auto& op : k.left_leg.source.ops)
      if (!put_op(k.left_leg.op(op), left.tables.at(op))) return std::nullopt;
    for (const auto& op : k.right_leg.source.ops)
      if (!put_op(k.right_leg.op(op), right.tables.at(op))) return std::nullopt;
    if (out.carriers.size() != out.signature.sorts.size() || out.tables.size() != out.signature.ops.size())
      return std::nullopt;
    return out;
  }
};

}  // namespace blendkit::msa
