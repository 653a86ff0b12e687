#pragma once

// The specification language.
//
//   msa system closed                      # MSA inclusion system (default strong)
//   sig P = {p, q}
//   msa sig N = sorts {s} ops { f : s -> s; c : -> s }
//   morph f : P -> Q { p |-> a, q |-> a }
//   pmorph g : P -> Q on {p} { p |-> a }
//   morph h : N -> N { sorts { s |-> s } ops { f : s -> s |-> f, c : -> s |-> c } }
//   pmorph k : N -> N on sorts {s} ops { c : -> s } { sorts { s |-> s } ops { c |-> c } }
//   sentence r : P = (p -> !q)
//   sentence e : N = (forall x:s . f(x) = x)
//   model M : P = {p}
//   model A : N = { carrier s = 2; f = [1, 0]; c = [0] }
//   theory T : P = { p; (p | q) }
//   span S = g, f
//   square Q = f1, f2, g1, g2
//   diagram D { node a : T; node b : Q; edge f : a -> b; }
//
// PL `|` and `->` are sugar over & and ! and disappear at parse time. In MSA
// terms a bound variable shadows a constant of the same name; an op
// overloaded on its result sort takes an ascription `c:s`. Ops may be named
// without their rank wherever the name alone is unambiguous.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "blendkit/error.hpp"
#include "blendkit/msa.hpp"
#include "blendkit/partial.hpp"
#include "blendkit/pl.hpp"
#include "blendkit/three_halves.hpp"

namespace blendkit::dsl {

enum class Logic { PL, MSA };

inline std::string to_string(Logic l) { return l == Logic::PL ? "pl" : "msa"; }

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

enum class DeclKind { Signature, Morphism, PartialMorphism, Sentence, Model, Theory, Span, Square, Diagram };

inline std::string to_string(DeclKind k) {
  switch (k) {
    case DeclKind::Signature:
      return "signature";
    case DeclKind::Morphism:
      return "morphism";
    case DeclKind::PartialMorphism:
      return "partial morphism";
    case DeclKind::Sentence:
      return "sentence";
    case DeclKind::Model:
      return "model";
    case DeclKind::Theory:
      return "theory";
    case DeclKind::Span:
      return "span";
    case DeclKind::Square:
      return "square";
    case DeclKind::Diagram:
      return "diagram";
  }
  return "";
}

struct SpanDecl {
  std::string left;
  std::string right;
  friend bool operator==(const SpanDecl&, const SpanDecl&) = default;
};

/// f1 : Σ0 → Σ1, f2 : Σ0 → Σ2, g1 : Σ1 → Σ, g2 : Σ2 → Σ.
struct SquareDecl {
  std::array<std::string, 4> morphisms;
  friend bool operator==(const SquareDecl&, const SquareDecl&) = default;
};

struct DiagramDecl {
  struct Node {
    std::string name;
    /// A theory, or a signature standing for its empty theory.
    std::string theory;
    friend bool operator==(const Node&, const Node&) = default;
  };
  struct Edge {
    std::string morphism;
    std::string from;
    std::string to;
    friend bool operator==(const Edge&, const Edge&) = default;
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  friend bool operator==(const DiagramDecl&, const DiagramDecl&) = default;
};

using PLPartial = PartialMorphism<pl::Morphism>;
using MSAPartial = PartialMorphism<msa::Morphism>;
using PLTheory = Theory<pl::Institution>;
using MSATheory = Theory<msa::Institution>;

using Payload = std::variant<pl::Signature, msa::Signature, pl::Morphism, msa::Morphism, PLPartial, MSAPartial,
                             pl::Sentence, msa::Sentence, pl::Model, msa::Algebra, PLTheory, MSATheory, SpanDecl,
                             SquareDecl, DiagramDecl>;

/// One named declaration. `refs` holds the names it was resolved against:
/// source and target signature of a morphism, the signature of a sentence,
/// model or theory. Positions do not take part in equality.
struct Declaration {
  DeclKind kind = DeclKind::Signature;
  std::string name;
  Logic logic = Logic::PL;
  std::vector<std::string> refs;
  Payload value;
  SourcePos pos;

  friend bool operator==(const Declaration& a, const Declaration& b) {
    return a.kind == b.kind && a.name == b.name && a.logic == b.logic && a.refs == b.refs && a.value == b.value;
  }
};

struct SpecDocument {
  std::optional<msa::InclusionKind> msa_system;
  std::vector<Declaration> declarations;

  msa::InclusionKind system() const { return msa_system.value_or(msa::InclusionKind::Strong); }

  const Declaration* find(DeclKind k, const std::string& name) const {
    for (const auto& d : declarations)
      if (d.kind == k && d.name == name) return &d;
    return nullptr;
  }
  const Declaration& get(DeclKind k, const std::string& name) const {
    if (const auto* d = find(k, name)) return *d;
    throw ValidationError("unknown " + to_string(k) + " '" + name + "'");
  }
  std::size_t count(DeclKind k) const {
    std::size_t n = 0;
    for (const auto& d : declarations) n += d.kind == k ? 1 : 0;
    return n;
  }

  friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

// ---------------------------------------------------------------------------
// Reference helpers shared by the parser, JSON import and the CLI

/// A morphism reference for places that take partial morphisms: a pmorph,
/// or a morph seen as its embedding.
inline const Declaration& morphism_decl(const SpecDocument& doc, const std::string& name) {
  const auto* p = doc.find(DeclKind::PartialMorphism, name);
  const auto* t = doc.find(DeclKind::Morphism, name);
  if (p && t) throw ValidationError("'" + name + "' names both a morph and a pmorph");
  if (!p && !t) throw ValidationError("unknown morphism '" + name + "'");
  return p ? *p : *t;
}

inline PLPartial pl_partial(const SpecDocument& doc, const std::string& name) {
  const auto& d = morphism_decl(doc, name);
  if (d.logic != Logic::PL) throw ValidationError("'" + name + "' is not a PL morphism");
  if (d.kind == DeclKind::Morphism) return embed(pl::Sets{}, std::get<pl::Morphism>(d.value));
  return std::get<PLPartial>(d.value);
}

inline MSAPartial msa_partial(const SpecDocument& doc, const std::string& name) {
  const auto& d = morphism_decl(doc, name);
  if (d.logic != Logic::MSA) throw ValidationError("'" + name + "' is not an MSA morphism");
  if (d.kind == DeclKind::Morphism) return embed(msa::Signatures(doc.system()), std::get<msa::Morphism>(d.value));
  return std::get<MSAPartial>(d.value);
}

/// A theory reference; a signature name means the theory without axioms.
template <class TheoryT, class Sig>
TheoryT theory_ref(const SpecDocument& doc, const std::string& name) {
  if (const auto* t = doc.find(DeclKind::Theory, name)) {
    if (!std::holds_alternative<TheoryT>(t->value)) throw ValidationError("theory '" + name + "' has the wrong logic");
    return std::get<TheoryT>(t->value);
  }
  if (const auto* s = doc.find(DeclKind::Signature, name)) {
    if (!std::holds_alternative<Sig>(s->value)) throw ValidationError("signature '" + name + "' has the wrong logic");
    return TheoryT{std::get<Sig>(s->value), {}};
  }
  throw ValidationError("unknown theory '" + name + "'");
}

// ---------------------------------------------------------------------------
// Building documents

/// Adds declarations one by one, enforcing unique names per kind and
/// resolving and typechecking every reference against what came before.
class DocumentBuilder {
 public:
  explicit DocumentBuilder(SpecDocument& doc) : doc_(&doc) {}

  const SpecDocument& document() const { return *doc_; }

  void set_system(msa::InclusionKind k) { doc_->msa_system = k; }

  Declaration& add(Declaration d) {
    if (doc_->find(d.kind, d.name)) throw ValidationError("duplicate " + to_string(d.kind) + " '" + d.name + "'");
    check(d);
    doc_->declarations.push_back(std::move(d));
    return doc_->declarations.back();
  }

  const Declaration& signature(const std::string& name) const { return doc_->get(DeclKind::Signature, name); }

 private:
  void check(const Declaration& d) const {
    switch (d.kind) {
      case DeclKind::Signature:
        if (auto* s = std::get_if<msa::Signature>(&d.value)) msa::validate(*s);
        return;
      case DeclKind::Morphism:
        if (auto* m = std::get_if<pl::Morphism>(&d.value)) pl::validate(*m);
        if (auto* m = std::get_if<msa::Morphism>(&d.value)) msa::validate(*m);
        return;
      case DeclKind::PartialMorphism:
        if (auto* m = std::get_if<PLPartial>(&d.value)) validate(pl::Sets{}, *m);
        if (auto* m = std::get_if<MSAPartial>(&d.value)) validate(msa::Signatures(doc_->system()), *m);
        return;
      case DeclKind::Span: {
        const auto& s = std::get<SpanDecl>(d.value);
        if (d.logic == Logic::PL) {
          if (!(pl_partial(*doc_, s.left).witness.target == pl_partial(*doc_, s.right).witness.target))
            throw ValidationError("span legs of '" + d.name + "' have different sources");
        } else if (!(msa_partial(*doc_, s.left).witness.target == msa_partial(*doc_, s.right).witness.target)) {
          throw ValidationError("span legs of '" + d.name + "' have different sources");
        }
        return;
      }
      case DeclKind::Square: {
        const auto& q = std::get<SquareDecl>(d.value);
        std::array<std::string, 4> src, tgt;
        for (std::size_t i = 0; i < 4; ++i) {
          const auto& m = doc_->get(DeclKind::Morphism, q.morphisms[i]);
          if (m.logic != d.logic) throw ValidationError("square '" + d.name + "' mixes logics");
          src[i] = m.refs.at(0);
          tgt[i] = m.refs.at(1);
        }
        if (src[0] != src[1] || tgt[0] != src[2] || tgt[1] != src[3] || tgt[2] != tgt[3])
          throw ValidationError("square '" + d.name + "' is not shaped f1:A->B, f2:A->C, g1:B->D, g2:C->D");
        return;
      }
      case DeclKind::Diagram: {
        const auto& g = std::get<DiagramDecl>(d.value);
        std::map<std::string, std::string> node_sig;
        for (const auto& n : g.nodes) {
          const auto* t = doc_->find(DeclKind::Theory, n.theory);
          const auto* s = doc_->find(DeclKind::Signature, n.theory);
          if (!t && !s) throw ValidationError("unknown theory '" + n.theory + "'");
          const auto& decl = t ? *t : *s;
          if (decl.logic != d.logic) throw ValidationError("diagram '" + d.name + "' mixes logics");
          if (!node_sig.emplace(n.name, t ? t->refs.at(0) : s->name).second)
            throw ValidationError("duplicate node '" + n.name + "'");
        }
        for (const auto& e : g.edges) {
          const auto& m = morphism_decl(*doc_, e.morphism);
          if (m.logic != d.logic) throw ValidationError("diagram '" + d.name + "' mixes logics");
          auto from = node_sig.find(e.from);
          auto to = node_sig.find(e.to);
          if (from == node_sig.end()) throw ValidationError("unknown node '" + e.from + "'");
          if (to == node_sig.end()) throw ValidationError("unknown node '" + e.to + "'");
          if (m.refs.at(0) != from->second || m.refs.at(1) != to->second)
            throw ValidationError("edge '" + e.morphism + "' does not connect the signatures of its nodes");
        }
        return;
      }
      default:
        return;
    }
  }

  SpecDocument* doc_;
};

// ---------------------------------------------------------------------------
// Lexer

struct Token {
  enum class Kind { Word, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  SourcePos pos;
};

inline bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (is_word_char(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word_char(text[j])) ++j;
      out.push_back({Token::Kind::Word, std::string(text.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (text.substr(i, 3) == "|->") {
      out.push_back({Token::Kind::Punct, "|->", pos});
      advance(3);
      continue;
    }
    if (text.substr(i, 2) == "->") {
      out.push_back({Token::Kind::Punct, "->", pos});
      advance(2);
      continue;
    }
    if (std::string_view("{}()[],;:=.!&|").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  out.push_back({Token::Kind::End, "", {line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, SpecDocument& doc) : tokens_(tokenize(text)), builder_(doc) {}

  void parse_document() {
    while (!at_end()) parse_declaration();
  }

  /// A single sentence over `sig`, the whole input.
  pl::Sentence parse_pl_sentence_only(const pl::Signature& sig) {
    auto s = pl_sentence(sig);
    expect_end();
    return s;
  }
  msa::Sentence parse_msa_sentence_only(const msa::Signature& sig) {
    auto s = msa_sentence(sig);
    expect_end();
    return s;
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool is(const std::string& text, std::size_t ahead = 0) const {
    return peek(ahead).kind != Token::Kind::End && peek(ahead).text == text;
  }
  bool accept(const std::string& text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, at.pos.line, at.pos.column);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }
  static std::string shown(const Token& t) { return t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'"; }
  void expect(const std::string& text) {
    if (!accept(text)) fail("expected '" + text + "', found " + shown(peek()));
  }
  void expect_end() {
    if (!at_end()) fail("unexpected " + shown(peek()));
  }
  std::string word(const std::string& what) {
    if (peek().kind != Token::Kind::Word) fail("expected " + what + ", found " + shown(peek()));
    return next().text;
  }
  int number() {
    const Token& t = peek();
    std::string w = word("a number");
    if (w.empty() || w.size() > 9 || !std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; }))
      fail("expected a number, found '" + w + "'", t);
    return std::stoi(w);
  }

  /// Run a builder step; library errors become parse errors at `at`.
  template <class F>
  auto guarded(const Token& at, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(e.what(), at);
    } catch (const ContractError& e) {
      fail(e.what(), at);
    }
  }

  // -- declarations ---------------------------------------------------------

  void parse_declaration() {
    const Token start = peek();
    if (is("msa") && is("system", 1)) {
      next();
      next();
      const Token& t = peek();
      std::string k = word("an inclusion system");
      guarded(t, [&] {
        builder_.set_system(msa::parse_inclusion_kind(k));
        return 0;
      });
      return;
    }
    if (accept("msa")) {
      if (!is("sig")) fail("expected 'sig' after 'msa'");
      next();
      return msa_signature_decl(start);
    }
    if (accept("pl")) {
      if (!is("sig")) fail("expected 'sig' after 'pl'");
    }
    std::string kw = word("a declaration");
    if (kw == "sig") return pl_signature_decl(start);
    if (kw == "morph") return morphism_decl(start, false);
    if (kw == "pmorph") return morphism_decl(start, true);
    if (kw == "sentence") return sentence_decl(start);
    if (kw == "model") return model_decl(start);
    if (kw == "theory") return theory_decl(start);
    if (kw == "span") return span_decl(start);
    if (kw == "square") return square_decl(start);
    if (kw == "diagram") return diagram_decl(start);
    fail("unknown declaration '" + kw + "'", start);
  }

  void add(const Token& at, Declaration d) {
    d.pos = at.pos;
    guarded(at, [&] {
      builder_.add(std::move(d));
      return 0;
    });
  }

  const Declaration& signature_ref() {
    const Token& t = peek();
    std::string name = word("a signature name");
    return guarded(t, [&]() -> const Declaration& { return builder_.signature(name); });
  }

  void pl_signature_decl(const Token& start) {
    std::string name = word("a signature name");
    expect("=");
    add(start, {DeclKind::Signature, name, Logic::PL, {}, pl_symbol_set(), {}});
  }

  pl::Signature pl_symbol_set() {
    pl::Signature sig;
    expect("{");
    if (!accept("}")) {
      do {
        const Token& t = peek();
        if (!sig.symbols.insert(word("a symbol")).second) fail("duplicate symbol '" + t.text + "'", t);
      } while (accept(","));
      expect("}");
    }
    return sig;
  }

  std::set<std::string> name_set() {
    std::set<std::string> out;
    expect("{");
    if (!accept("}")) {
      do {
        const Token& t = peek();
        if (!out.insert(word("a name")).second) fail("duplicate name '" + t.text + "'", t);
      } while (accept(","));
      expect("}");
    }
    return out;
  }

  /// `name : s1 .. sn -> s` after the name has been read.
  msa::OpDecl rank_after_colon(std::string name) {
    msa::OpDecl op{std::move(name), {}, {}};
    while (!is("->")) op.args.push_back(word("a sort"));
    expect("->");
    op.result = word("a result sort");
    return op;
  }

  void msa_signature_decl(const Token& start) {
    std::string name = word("a signature name");
    expect("=");
    msa::Signature sig;
    if (!is("sorts")) fail("expected 'sorts'");
    next();
    sig.sorts = name_set();
    if (accept("ops")) {
      expect("{");
      while (!accept("}")) {
        const Token& t = peek();
        std::string op_name = word("an operation name");
        expect(":");
        auto op = rank_after_colon(op_name);
        if (!sig.ops.insert(op).second) fail("duplicate operation '" + op.name + "'", t);
        if (!is("}")) {
          if (!accept(";")) expect(",");
        }
      }
    }
    add(start, {DeclKind::Signature, name, Logic::MSA, {}, std::move(sig), {}});
  }

  /// An op of `sig` written as `name` or `name : rank`.
  msa::OpDecl op_ref(const msa::Signature& sig) {
    const Token& t = peek();
    std::string name = word("an operation name");
    if (accept(":")) {
      auto op = rank_after_colon(name);
      if (!sig.has_op(op)) fail("no operation " + msa::rank_string(op.args, op.result) + " named '" + name + "'", t);
      return op;
    }
    std::vector<msa::OpDecl> found;
    for (const auto& op : sig.ops)
      if (op.name == name) found.push_back(op);
    if (found.empty()) fail("unknown operation '" + name + "'", t);
    if (found.size() > 1) fail("operation '" + name + "' is overloaded; give its rank", t);
    return found.front();
  }

  msa::Signature msa_domain(const msa::Signature& source) {
    msa::Signature d;
    if (!is("sorts")) fail("expected 'sorts'");
    next();
    const Token& t = peek();
    d.sorts = name_set();
    for (const auto& s : d.sorts)
      if (!source.has_sort(s)) fail("domain sort '" + s + "' is not in the source signature", t);
    if (accept("ops")) {
      expect("{");
      while (!accept("}")) {
        d.ops.insert(op_ref(source));
        if (!is("}")) {
          if (!accept(";")) expect(",");
        }
      }
    }
    return d;
  }

  pl::Morphism pl_map(const Token& at, const pl::Signature& source, const pl::Signature& target) {
    pl::Morphism m{source, target, {}};
    expect("{");
    if (!accept("}")) {
      do {
        const Token& t = peek();
        std::string from = word("a symbol");
        expect("|->");
        std::string to = word("a symbol");
        if (!m.map.emplace(from, to).second) fail("symbol '" + from + "' mapped twice", t);
      } while (accept(","));
      expect("}");
    }
    guarded(at, [&] {
      pl::validate(m);
      return 0;
    });
    return m;
  }

  msa::Morphism msa_map(const Token& at, const msa::Signature& source, const msa::Signature& target) {
    msa::Morphism m{source, target, {}, {}};
    expect("{");
    if (accept("sorts")) {
      expect("{");
      if (!accept("}")) {
        do {
          const Token& t = peek();
          std::string from = word("a sort");
          expect("|->");
          if (!m.sorts.emplace(from, word("a sort")).second) fail("sort '" + from + "' mapped twice", t);
        } while (accept(","));
        expect("}");
      }
    }
    if (accept("ops")) {
      expect("{");
      if (!accept("}")) {
        do {
          const Token& t = peek();
          auto op = op_ref(source);
          expect("|->");
          if (!m.ops.emplace(op, word("an operation name")).second) fail("operation '" + op.name + "' mapped twice", t);
        } while (accept(","));
        expect("}");
      }
    }
    expect("}");
    guarded(at, [&] {
      msa::validate(m);
      return 0;
    });
    return m;
  }

  void morphism_decl(const Token& start, bool partial) {
    std::string name = word("a morphism name");
    expect(":");
    const auto& src = signature_ref();
    expect("->");
    const auto& tgt = signature_ref();
    if (src.logic != tgt.logic) fail("morphism '" + name + "' connects signatures of different logics", start);
    Declaration d{partial ? DeclKind::PartialMorphism : DeclKind::Morphism, name, src.logic, {src.name, tgt.name}, {}, {}};
    if (src.logic == Logic::PL) {
      const auto& s = std::get<pl::Signature>(src.value);
      const auto& t = std::get<pl::Signature>(tgt.value);
      if (partial) {
        if (!is("on")) fail("expected 'on' and a definition domain");
        next();
        const Token& dt = peek();
        auto dom_sig = pl_symbol_set();
        if (!s.includes(dom_sig)) fail("definition domain is not a subset of the source", dt);
        auto total = pl_map(start, dom_sig, t);
        d.value = guarded(start, [&] { return make_partial(pl::Sets{}, s, total); });
      } else {
        d.value = pl_map(start, s, t);
      }
    } else {
      const auto& s = std::get<msa::Signature>(src.value);
      const auto& t = std::get<msa::Signature>(tgt.value);
      if (partial) {
        if (!is("on")) fail("expected 'on' and a definition domain");
        next();
        auto dom_sig = msa_domain(s);
        auto total = msa_map(start, dom_sig, t);
        msa::Signatures sys(builder_.document().system());
        d.value = guarded(start, [&] { return make_partial(sys, s, total); });
      } else {
        d.value = msa_map(start, s, t);
      }
    }
    add(start, std::move(d));
  }

  void sentence_decl(const Token& start) {
    std::string name = word("a sentence name");
    expect(":");
    const auto& sig = signature_ref();
    expect("=");
    Declaration d{DeclKind::Sentence, name, sig.logic, {sig.name}, {}, {}};
    if (sig.logic == Logic::PL)
      d.value = pl_sentence(std::get<pl::Signature>(sig.value));
    else
      d.value = msa_sentence(std::get<msa::Signature>(sig.value));
    add(start, std::move(d));
  }

  void model_decl(const Token& start) {
    std::string name = word("a model name");
    expect(":");
    const auto& sig = signature_ref();
    expect("=");
    Declaration d{DeclKind::Model, name, sig.logic, {sig.name}, {}, {}};
    if (sig.logic == Logic::PL) {
      const auto& s = std::get<pl::Signature>(sig.value);
      const Token& t = peek();
      pl::Model m{s, pl_symbol_set().symbols};
      guarded(t, [&] {
        pl::validate(m);
        return 0;
      });
      d.value = std::move(m);
    } else {
      d.value = algebra(std::get<msa::Signature>(sig.value));
    }
    add(start, std::move(d));
  }

  msa::Algebra algebra(const msa::Signature& sig) {
    const Token& at = peek();
    msa::Algebra a{sig, {}, {}};
    expect("{");
    while (!accept("}")) {
      const Token& t = peek();
      if (is("carrier") && !is(":", 1) && !is("=", 1)) {
        next();
        std::string s = word("a sort");
        expect("=");
        if (!a.carriers.emplace(s, number()).second) fail("carrier of '" + s + "' given twice", t);
      } else {
        auto op = op_ref(sig);
        expect("=");
        expect("[");
        std::vector<int> table;
        if (!accept("]")) {
          do table.push_back(number());
          while (accept(","));
          expect("]");
        }
        if (!a.tables.emplace(op, std::move(table)).second) fail("table of '" + op.name + "' given twice", t);
      }
      if (!is("}")) expect(";");
    }
    guarded(at, [&] {
      msa::validate(a);
      return 0;
    });
    return a;
  }

  void theory_decl(const Token& start) {
    std::string name = word("a theory name");
    expect(":");
    const auto& sig = signature_ref();
    expect("=");
    expect("{");
    Declaration d{DeclKind::Theory, name, sig.logic, {sig.name}, {}, {}};
    if (sig.logic == Logic::PL) {
      PLTheory t{std::get<pl::Signature>(sig.value), {}};
      while (!accept("}")) {
        t.axioms.push_back(pl_sentence(t.signature));
        if (!is("}")) expect(";");
      }
      d.value = std::move(t);
    } else {
      MSATheory t{std::get<msa::Signature>(sig.value), {}};
      while (!accept("}")) {
        t.axioms.push_back(msa_sentence(t.signature));
        if (!is("}")) expect(";");
      }
      d.value = std::move(t);
    }
    add(start, std::move(d));
  }

  const Declaration& morphism_ref() {
    const Token& t = peek();
    std::string name = word("a morphism name");
    return guarded(t, [&]() -> const Declaration& { return dsl::morphism_decl(builder_.document(), name); });
  }

  void span_decl(const Token& start) {
    std::string name = word("a span name");
    expect("=");
    const auto& l = morphism_ref();
    expect(",");
    const auto& r = morphism_ref();
    if (l.logic != r.logic) fail("span '" + name + "' mixes logics", start);
    add(start, {DeclKind::Span, name, l.logic, {}, SpanDecl{l.name, r.name}, {}});
  }

  void square_decl(const Token& start) {
    std::string name = word("a square name");
    expect("=");
    SquareDecl q;
    Logic logic = Logic::PL;
    for (std::size_t i = 0; i < 4; ++i) {
      if (i) expect(",");
      const Token& t = peek();
      std::string m = word("a morphism name");
      const auto& d = guarded(t, [&]() -> const Declaration& { return builder_.document().get(DeclKind::Morphism, m); });
      if (i == 0) logic = d.logic;
      q.morphisms[i] = m;
    }
    add(start, {DeclKind::Square, name, logic, {}, std::move(q), {}});
  }

  void diagram_decl(const Token& start) {
    std::string name = word("a diagram name");
    expect("{");
    DiagramDecl g;
    std::optional<Logic> logic;
    while (!accept("}")) {
      const Token& t = peek();
      std::string kw = word("'node' or 'edge'");
      if (kw == "node") {
        std::string n = word("a node name");
        expect(":");
        const Token& rt = peek();
        std::string ref = word("a theory name");
        const auto* th = builder_.document().find(DeclKind::Theory, ref);
        const auto* sg = builder_.document().find(DeclKind::Signature, ref);
        if (!th && !sg) fail("unknown theory '" + ref + "'", rt);
        if (!logic) logic = (th ? th : sg)->logic;
        g.nodes.push_back({n, ref});
      } else if (kw == "edge") {
        const auto& m = morphism_ref();
        if (!logic) logic = m.logic;
        expect(":");
        std::string from = word("a node name");
        expect("->");
        std::string to = word("a node name");
        g.edges.push_back({m.name, from, to});
      } else {
        fail("expected 'node' or 'edge', found '" + kw + "'", t);
      }
      expect(";");
    }
    add(start, {DeclKind::Diagram, name, logic.value_or(Logic::PL), {}, std::move(g), {}});
  }

  // -- PL sentences ---------------------------------------------------------

  pl::Sentence pl_sentence(const pl::Signature& sig) { return pl_implication(sig); }

  pl::Sentence pl_implication(const pl::Signature& sig) {
    auto l = pl_disjunction(sig);
    if (!accept("->")) return l;
    auto r = pl_implication(sig);
    return pl::Sentence::neg(pl::Sentence::conj(l, pl::Sentence::neg(r)));
  }

  pl::Sentence pl_disjunction(const pl::Signature& sig) {
    auto l = pl_conjunction(sig);
    while (accept("|")) {
      auto r = pl_conjunction(sig);
      l = pl::Sentence::neg(pl::Sentence::conj(pl::Sentence::neg(l), pl::Sentence::neg(r)));
    }
    return l;
  }

  pl::Sentence pl_conjunction(const pl::Signature& sig) {
    auto l = pl_unary(sig);
    while (accept("&")) l = pl::Sentence::conj(l, pl_unary(sig));
    return l;
  }

  pl::Sentence pl_unary(const pl::Signature& sig) {
    if (accept("!")) return pl::Sentence::neg(pl_unary(sig));
    if (accept("(")) {
      auto s = pl_sentence(sig);
      expect(")");
      return s;
    }
    const Token& t = peek();
    std::string sym = word("a sentence");
    if (!sig.contains(sym)) fail("symbol '" + sym + "' is not in the signature", t);
    return pl::Sentence::var(sym);
  }

  // -- MSA sentences --------------------------------------------------------

  struct RawTerm {
    std::string name;
    std::vector<RawTerm> args;
    bool call = false;
    std::optional<std::string> ascription;
    Token at;
  };

  struct Ambiguous {
    Token at;
    std::string name;
  };

  using Scope = std::vector<msa::Variable>;

  msa::Sentence msa_sentence(const msa::Signature& sig) {
    Scope scope;
    return msa_implication(sig, scope);
  }

  msa::Sentence msa_implication(const msa::Signature& sig, Scope& scope) {
    auto l = msa_disjunction(sig, scope);
    if (!accept("->")) return l;
    return msa::Sentence::implies(std::move(l), msa_implication(sig, scope));
  }

  msa::Sentence msa_disjunction(const msa::Signature& sig, Scope& scope) {
    auto l = msa_conjunction(sig, scope);
    while (accept("|")) l = msa::Sentence::disj(std::move(l), msa_conjunction(sig, scope));
    return l;
  }

  msa::Sentence msa_conjunction(const msa::Signature& sig, Scope& scope) {
    auto l = msa_unary(sig, scope);
    while (accept("&")) l = msa::Sentence::conj(std::move(l), msa_unary(sig, scope));
    return l;
  }

  msa::Sentence msa_unary(const msa::Signature& sig, Scope& scope) {
    if (accept("!")) return msa::Sentence::neg(msa_unary(sig, scope));
    if (accept("(")) {
      auto s = msa_implication(sig, scope);
      expect(")");
      return s;
    }
    if (is("forall") || is("exists")) {
      bool all = next().text == "forall";
      std::vector<msa::Variable> vars;
      do {
        std::string v = word("a variable");
        expect(":");
        const Token& st = peek();
        std::string s = word("a sort");
        if (!sig.has_sort(s)) fail("unknown sort '" + s + "'", st);
        vars.push_back({v, s});
      } while (accept(","));
      expect(".");
      std::size_t old = scope.size();
      scope.insert(scope.end(), vars.begin(), vars.end());
      auto body = msa_implication(sig, scope);
      scope.resize(old);
      return all ? msa::Sentence::forall(std::move(vars), std::move(body))
                 : msa::Sentence::exists(std::move(vars), std::move(body));
    }
    const Token& at = peek();
    auto lhs = raw_term();
    expect("=");
    auto rhs = raw_term();
    msa::Term l, r;
    try {
      l = resolve(lhs, sig, scope, std::nullopt);
      r = resolve(rhs, sig, scope, l.sort());
    } catch (const Ambiguous&) {
      try {
        r = resolve(rhs, sig, scope, std::nullopt);
        l = resolve(lhs, sig, scope, r.sort());
      } catch (const Ambiguous& a) {
        fail("operation '" + a.name + "' is ambiguous here; add a sort ascription", a.at);
      }
    }
    if (l.sort() != r.sort()) fail("equation between sorts '" + l.sort() + "' and '" + r.sort() + "'", at);
    return msa::Sentence::eq(std::move(l), std::move(r));
  }

  RawTerm raw_term() {
    RawTerm t;
    t.at = peek();
    t.name = word("a term");
    if (accept("(")) {
      t.call = true;
      if (!accept(")")) {
        do t.args.push_back(raw_term());
        while (accept(","));
        expect(")");
      }
    }
    if (accept(":")) t.ascription = word("a sort");
    return t;
  }

  msa::Term resolve(const RawTerm& raw, const msa::Signature& sig, const Scope& scope,
                    const std::optional<std::string>& expected) {
    if (!raw.call) {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->name == raw.name) {
          if (raw.ascription && *raw.ascription != it->sort)
            fail("variable '" + raw.name + "' has sort '" + it->sort + "'", raw.at);
          return msa::Term::variable(it->name, it->sort);
        }
    }
    std::vector<msa::Term> args;
    std::vector<msa::Sort> arg_sorts;
    for (const auto& a : raw.args) {
      args.push_back(resolve(a, sig, scope, std::nullopt));
      arg_sorts.push_back(args.back().sort());
    }
    auto cands = sig.lookup(raw.name, arg_sorts);
    if (cands.empty()) {
      if (!raw.call) fail("unknown variable or constant '" + raw.name + "'", raw.at);
      fail("no operation '" + raw.name + "' takes (" + msa::rank_string(arg_sorts, "?") + ")", raw.at);
    }
    auto want = raw.ascription ? raw.ascription : expected;
    if (cands.size() > 1 && want) {
      std::vector<msa::OpDecl> kept;
      for (const auto& c : cands)
        if (c.result == *want) kept.push_back(c);
      cands = std::move(kept);
    }
    if (raw.ascription && (cands.empty() || cands.front().result != *raw.ascription))
      fail("operation '" + raw.name + "' has no rank ending in '" + *raw.ascription + "'", raw.at);
    if (cands.empty()) fail("operation '" + raw.name + "' has no rank ending in '" + *want + "'", raw.at);
    if (cands.size() > 1) throw Ambiguous{raw.at, raw.name};
    return msa::Term::apply(cands.front(), std::move(args));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  DocumentBuilder builder_;
};

inline SpecDocument parse(std::string_view text) {
  SpecDocument doc;
  Parser(text, doc).parse_document();
  return doc;
}

inline pl::Sentence parse_pl_sentence(std::string_view text, const pl::Signature& sig) {
  SpecDocument scratch;
  return Parser(text, scratch).parse_pl_sentence_only(sig);
}

inline msa::Sentence parse_msa_sentence(std::string_view text, const msa::Signature& sig) {
  SpecDocument scratch;
  return Parser(text, scratch).parse_msa_sentence_only(sig);
}

// ---------------------------------------------------------------------------
// Serializer

namespace detail {

template <class Range, class F>
void join(std::ostream& os, const Range& r, const std::string& sep, F&& each) {
  bool first = true;
  for (const auto& x : r) {
    if (!first) os << sep;
    each(x);
    first = false;
  }
}

inline void write_names(std::ostream& os, const std::set<std::string>& names) {
  os << '{';
  join(os, names, ", ", [&](const std::string& s) { os << s; });
  os << '}';
}

inline void write_op(std::ostream& os, const msa::OpDecl& op) { os << op.name << " : " << msa::rank_string(op.args, op.result); }

inline void write_msa_signature(std::ostream& os, const msa::Signature& sig) {
  os << "sorts ";
  write_names(os, sig.sorts);
  os << " ops {";
  if (!sig.ops.empty()) {
    os << ' ';
    join(os, sig.ops, "; ", [&](const msa::OpDecl& op) { write_op(os, op); });
    os << ' ';
  }
  os << '}';
}

inline void write_pl_map(std::ostream& os, const pl::Morphism& m) {
  os << '{';
  if (!m.map.empty()) {
    os << ' ';
    join(os, m.map, ", ", [&](const auto& kv) { os << kv.first << " |-> " << kv.second; });
    os << ' ';
  }
  os << '}';
}

inline void write_msa_map(std::ostream& os, const msa::Morphism& m) {
  os << "{ sorts {";
  if (!m.sorts.empty()) {
    os << ' ';
    join(os, m.sorts, ", ", [&](const auto& kv) { os << kv.first << " |-> " << kv.second; });
    os << ' ';
  }
  os << "} ops {";
  if (!m.ops.empty()) {
    os << ' ';
    join(os, m.ops, ", ", [&](const auto& kv) {
      write_op(os, kv.first);
      os << " |-> " << kv.second;
    });
    os << ' ';
  }
  os << "} }";
}

inline void write_algebra(std::ostream& os, const msa::Algebra& a) {
  os << '{';
  bool first = true;
  for (const auto& [s, n] : a.carriers) {
    os << (first ? " " : "; ") << "carrier " << s << " = " << n;
    first = false;
  }
  for (const auto& [op, table] : a.tables) {
    os << (first ? " " : "; ");
    write_op(os, op);
    os << " = [";
    join(os, table, ", ", [&](int v) { os << v; });
    os << ']';
    first = false;
  }
  os << (first ? "}" : " }");
}

}  // namespace detail

/// One declaration in canonical syntax; `doc` supplies the signatures that
/// decide where MSA ops need ascriptions.
inline void write_declaration(std::ostream& os, const SpecDocument& doc, const Declaration& d) {
  switch (d.kind) {
    case DeclKind::Signature:
      if (d.logic == Logic::PL) {
        os << "sig " << d.name << " = ";
        detail::write_names(os, std::get<pl::Signature>(d.value).symbols);
      } else {
        os << "msa sig " << d.name << " = ";
        detail::write_msa_signature(os, std::get<msa::Signature>(d.value));
      }
      break;
    case DeclKind::Morphism:
      os << "morph " << d.name << " : " << d.refs.at(0) << " -> " << d.refs.at(1) << ' ';
      if (d.logic == Logic::PL)
        detail::write_pl_map(os, std::get<pl::Morphism>(d.value));
      else
        detail::write_msa_map(os, std::get<msa::Morphism>(d.value));
      break;
    case DeclKind::PartialMorphism:
      os << "pmorph " << d.name << " : " << d.refs.at(0) << " -> " << d.refs.at(1) << " on ";
      if (d.logic == Logic::PL) {
        const auto& p = std::get<PLPartial>(d.value);
        detail::write_names(os, p.witness.source.symbols);
        os << ' ';
        detail::write_pl_map(os, p.total);
      } else {
        const auto& p = std::get<MSAPartial>(d.value);
        detail::write_msa_signature(os, p.witness.source);
        os << ' ';
        detail::write_msa_map(os, p.total);
      }
      break;
    case DeclKind::Sentence:
      os << "sentence " << d.name << " : " << d.refs.at(0) << " = ";
      if (d.logic == Logic::PL) {
        pl::write_sentence(os, std::get<pl::Sentence>(d.value));
      } else {
        const auto& sig = std::get<msa::Signature>(doc.get(DeclKind::Signature, d.refs.at(0)).value);
        msa::write_sentence(os, std::get<msa::Sentence>(d.value), &sig);
      }
      break;
    case DeclKind::Model:
      os << "model " << d.name << " : " << d.refs.at(0) << " = ";
      if (d.logic == Logic::PL)
        detail::write_names(os, std::get<pl::Model>(d.value).truths);
      else
        detail::write_algebra(os, std::get<msa::Algebra>(d.value));
      break;
    case DeclKind::Theory: {
      os << "theory " << d.name << " : " << d.refs.at(0) << " = {";
      if (d.logic == Logic::PL) {
        const auto& t = std::get<PLTheory>(d.value);
        if (!t.axioms.empty()) {
          os << ' ';
          detail::join(os, t.axioms, "; ", [&](const pl::Sentence& s) { pl::write_sentence(os, s); });
          os << ' ';
        }
      } else {
        const auto& t = std::get<MSATheory>(d.value);
        if (!t.axioms.empty()) {
          os << ' ';
          detail::join(os, t.axioms, "; ", [&](const msa::Sentence& s) { msa::write_sentence(os, s, &t.signature); });
          os << ' ';
        }
      }
      os << '}';
      break;
    }
    case DeclKind::Span: {
      const auto& s = std::get<SpanDecl>(d.value);
      os << "span " << d.name << " = " << s.left << ", " << s.right;
      break;
    }
    case DeclKind::Square: {
      const auto& q = std::get<SquareDecl>(d.value);
      os << "square " << d.name << " = " << q.morphisms[0] << ", " << q.morphisms[1] << ", " << q.morphisms[2] << ", "
         << q.morphisms[3];
      break;
    }
    case DeclKind::Diagram: {
      const auto& g = std::get<DiagramDecl>(d.value);
      os << "diagram " << d.name << " {";
      for (const auto& n : g.nodes) os << " node " << n.name << " : " << n.theory << ';';
      for (const auto& e : g.edges) os << " edge " << e.morphism << " : " << e.from << " -> " << e.to << ';';
      os << " }";
      break;
    }
  }
}

/// Canonical text: one declaration per line, system line first if set.
inline std::string serialize(const SpecDocument& doc) {
  std::ostringstream os;
  if (doc.msa_system) os << "msa system " << msa::to_string(*doc.msa_system) << '\n';
  for (const auto& d : doc.declarations) {
    write_declaration(os, doc, d);
    os << '\n';
  }
  return os.str();
}

}  // namespace blendkit::dsl
