#pragma once

// JSON form of a SpecDocument, the machine interface. Layout:
//
//   { "msa_system": "strong",                       (optional)
//     "declarations": [ { "kind": ..., "name": ..., "logic": "pl"|"msa", ... } ] }
//
// Per kind:
//   signature         pl: "symbols": [..]   msa: "sorts": [..], "ops": [op..]
//   morphism          "source", "target", then pl: "map": {s: t}
//                     msa: "sorts": {s: t}, "ops": [op + "image"]
//   partial_morphism  as morphism plus "domain": pl [..] | msa {"sorts", "ops"}
//   sentence          "signature", "text" (sentence in DSL syntax)
//   model             "signature", pl: "truths": [..]
//                     msa: "carriers": {s: n}, "tables": [op + "table"]
//   theory            "signature", "axioms": [text..]
//   span              "left", "right"
//   square            "morphisms": [f1, f2, g1, g2]
//   diagram           "nodes": [{"name", "theory"}], "edges": [{"morphism", "from", "to"}]
//
// where op = {"name", "args": [..], "result"}. Import goes through the same
// builder as the DSL, so it enforces the same checks.

#include <string>
#include <string_view>

#include "json.hpp"  // vendored nlohmann/json

#include "blendkit/dsl.hpp"
#include "blendkit/error.hpp"

namespace blendkit::dsl {

using json = nlohmann::json;

namespace detail {

inline const char* kind_key(DeclKind k) {
  switch (k) {
    case DeclKind::Signature:
      return "signature";
    case DeclKind::Morphism:
      return "morphism";
    case DeclKind::PartialMorphism:
      return "partial_morphism";
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

inline DeclKind kind_from_key(const std::string& s) {
  for (auto k : {DeclKind::Signature, DeclKind::Morphism, DeclKind::PartialMorphism, DeclKind::Sentence,
                 DeclKind::Model, DeclKind::Theory, DeclKind::Span, DeclKind::Square, DeclKind::Diagram})
    if (s == kind_key(k)) return k;
  throw ValidationError("unknown declaration kind '" + s + "'");
}

inline json op_json(const msa::OpDecl& op) { return {{"name", op.name}, {"args", op.args}, {"result", op.result}}; }

inline msa::OpDecl op_from(const json& j) {
  return {j.at("name").get<std::string>(), j.at("args").get<std::vector<std::string>>(),
          j.at("result").get<std::string>()};
}

inline json msa_sig_json(const msa::Signature& sig) {
  json ops = json::array();
  for (const auto& op : sig.ops) ops.push_back(op_json(op));
  return {{"sorts", sig.sorts}, {"ops", ops}};
}

inline msa::Signature msa_sig_from(const json& j) {
  msa::Signature sig;
  for (const auto& s : j.at("sorts")) sig.sorts.insert(s.get<std::string>());
  for (const auto& op : j.at("ops")) sig.ops.insert(op_from(op));
  return sig;
}

inline void put_msa_map(json& out, const msa::Morphism& m) {
  out["sorts"] = m.sorts;
  json ops = json::array();
  for (const auto& [op, img] : m.ops) {
    auto o = op_json(op);
    o["image"] = img;
    ops.push_back(o);
  }
  out["ops"] = ops;
}

inline msa::Morphism msa_map_from(const json& j, const msa::Signature& source, const msa::Signature& target) {
  msa::Morphism m{source, target, j.at("sorts").get<std::map<std::string, std::string>>(), {}};
  for (const auto& o : j.at("ops")) m.ops.emplace(op_from(o), o.at("image").get<std::string>());
  msa::validate(m);
  return m;
}

inline std::string sentence_text(const SpecDocument& doc, const Declaration& d, const msa::Sentence& s) {
  const auto& sig = std::get<msa::Signature>(doc.get(DeclKind::Signature, d.refs.at(0)).value);
  return msa::to_string(s, &sig);
}

}  // namespace detail

inline json declaration_to_json(const SpecDocument& doc, const Declaration& d) {
  json j{{"kind", detail::kind_key(d.kind)}, {"name", d.name}, {"logic", to_string(d.logic)}};
  switch (d.kind) {
    case DeclKind::Signature:
      if (d.logic == Logic::PL) {
        j["symbols"] = std::get<pl::Signature>(d.value).symbols;
      } else {
        j.update(detail::msa_sig_json(std::get<msa::Signature>(d.value)));
      }
      break;
    case DeclKind::Morphism:
    case DeclKind::PartialMorphism:
      j["source"] = d.refs.at(0);
      j["target"] = d.refs.at(1);
      if (d.logic == Logic::PL) {
        const auto& m = d.kind == DeclKind::Morphism ? std::get<pl::Morphism>(d.value) : std::get<PLPartial>(d.value).total;
        j["map"] = m.map;
        if (d.kind == DeclKind::PartialMorphism) j["domain"] = m.source.symbols;
      } else {
        const auto& m =
            d.kind == DeclKind::Morphism ? std::get<msa::Morphism>(d.value) : std::get<MSAPartial>(d.value).total;
        detail::put_msa_map(j, m);
        if (d.kind == DeclKind::PartialMorphism) j["domain"] = detail::msa_sig_json(m.source);
      }
      break;
    case DeclKind::Sentence:
      j["signature"] = d.refs.at(0);
      j["text"] = d.logic == Logic::PL ? pl::to_string(std::get<pl::Sentence>(d.value))
                                       : detail::sentence_text(doc, d, std::get<msa::Sentence>(d.value));
      break;
    case DeclKind::Model:
      j["signature"] = d.refs.at(0);
      if (d.logic == Logic::PL) {
        j["truths"] = std::get<pl::Model>(d.value).truths;
      } else {
        const auto& a = std::get<msa::Algebra>(d.value);
        j["carriers"] = a.carriers;
        json tables = json::array();
        for (const auto& [op, t] : a.tables) {
          auto o = detail::op_json(op);
          o["table"] = t;
          tables.push_back(o);
        }
        j["tables"] = tables;
      }
      break;
    case DeclKind::Theory: {
      j["signature"] = d.refs.at(0);
      json axioms = json::array();
      if (d.logic == Logic::PL) {
        for (const auto& s : std::get<PLTheory>(d.value).axioms) axioms.push_back(pl::to_string(s));
      } else {
        for (const auto& s : std::get<MSATheory>(d.value).axioms) axioms.push_back(detail::sentence_text(doc, d, s));
      }
      j["axioms"] = axioms;
      break;
    }
    case DeclKind::Span: {
      const auto& s = std::get<SpanDecl>(d.value);
      j["left"] = s.left;
      j["right"] = s.right;
      break;
    }
    case DeclKind::Square:
      j["morphisms"] = std::get<SquareDecl>(d.value).morphisms;
      break;
    case DeclKind::Diagram: {
      const auto& g = std::get<DiagramDecl>(d.value);
      json nodes = json::array(), edges = json::array();
      for (const auto& n : g.nodes) nodes.push_back({{"name", n.name}, {"theory", n.theory}});
      for (const auto& e : g.edges) edges.push_back({{"morphism", e.morphism}, {"from", e.from}, {"to", e.to}});
      j["nodes"] = nodes;
      j["edges"] = edges;
      break;
    }
  }
  return j;
}

inline json to_json(const SpecDocument& doc) {
  json decls = json::array();
  for (const auto& d : doc.declarations) decls.push_back(declaration_to_json(doc, d));
  json out{{"declarations", decls}};
  if (doc.msa_system) out["msa_system"] = msa::to_string(*doc.msa_system);
  return out;
}

namespace detail {

inline Declaration declaration_from_json(const SpecDocument& doc, const json& j) {
  Declaration d;
  d.kind = kind_from_key(j.at("kind").get<std::string>());
  d.name = j.at("name").get<std::string>();
  auto logic = j.at("logic").get<std::string>();
  if (logic != "pl" && logic != "msa") throw ValidationError("unknown logic '" + logic + "'");
  d.logic = logic == "pl" ? Logic::PL : Logic::MSA;
  auto sig_of = [&](const std::string& key) -> const Declaration& {
    const auto& s = doc.get(DeclKind::Signature, j.at(key).get<std::string>());
    if (s.logic != d.logic) throw ValidationError("'" + d.name + "' refers to a signature of another logic");
    d.refs.push_back(s.name);
    return s;
  };
  switch (d.kind) {
    case DeclKind::Signature:
      if (d.logic == Logic::PL) {
        pl::Signature s;
        for (const auto& x : j.at("symbols")) s.symbols.insert(x.get<std::string>());
        d.value = s;
      } else {
        d.value = msa_sig_from(j);
      }
      break;
    case DeclKind::Morphism:
    case DeclKind::PartialMorphism: {
      const auto& src = sig_of("source");
      const auto& tgt = sig_of("target");
      if (d.logic == Logic::PL) {
        const auto& s = std::get<pl::Signature>(src.value);
        pl::Signature from = s;
        if (d.kind == DeclKind::PartialMorphism) {
          from = {};
          for (const auto& x : j.at("domain")) from.symbols.insert(x.get<std::string>());
        }
        pl::Morphism m{from, std::get<pl::Signature>(tgt.value), j.at("map").get<std::map<std::string, std::string>>()};
        pl::validate(m);
        if (d.kind == DeclKind::Morphism)
          d.value = m;
        else
          d.value = make_partial(pl::Sets{}, s, m);
      } else {
        const auto& s = std::get<msa::Signature>(src.value);
        auto from = d.kind == DeclKind::PartialMorphism ? msa_sig_from(j.at("domain")) : s;
        auto m = msa_map_from(j, from, std::get<msa::Signature>(tgt.value));
        if (d.kind == DeclKind::Morphism)
          d.value = m;
        else
          d.value = make_partial(msa::Signatures(doc.system()), s, m);
      }
      break;
    }
    case DeclKind::Sentence: {
      const auto& s = sig_of("signature");
      auto text = j.at("text").get<std::string>();
      if (d.logic == Logic::PL)
        d.value = parse_pl_sentence(text, std::get<pl::Signature>(s.value));
      else
        d.value = parse_msa_sentence(text, std::get<msa::Signature>(s.value));
      break;
    }
    case DeclKind::Model: {
      const auto& s = sig_of("signature");
      if (d.logic == Logic::PL) {
        pl::Model m{std::get<pl::Signature>(s.value), {}};
        for (const auto& x : j.at("truths")) m.truths.insert(x.get<std::string>());
        pl::validate(m);
        d.value = m;
      } else {
        msa::Algebra a{std::get<msa::Signature>(s.value), j.at("carriers").get<std::map<std::string, int>>(), {}};
        for (const auto& t : j.at("tables")) a.tables.emplace(op_from(t), t.at("table").get<std::vector<int>>());
        msa::validate(a);
        d.value = a;
      }
      break;
    }
    case DeclKind::Theory: {
      const auto& s = sig_of("signature");
      if (d.logic == Logic::PL) {
        PLTheory t{std::get<pl::Signature>(s.value), {}};
        for (const auto& x : j.at("axioms")) t.axioms.push_back(parse_pl_sentence(x.get<std::string>(), t.signature));
        d.value = t;
      } else {
        MSATheory t{std::get<msa::Signature>(s.value), {}};
        for (const auto& x : j.at("axioms")) t.axioms.push_back(parse_msa_sentence(x.get<std::string>(), t.signature));
        d.value = t;
      }
      break;
    }
    case DeclKind::Span:
      d.value = SpanDecl{j.at("left").get<std::string>(), j.at("right").get<std::string>()};
      break;
    case DeclKind::Square:
      d.value = SquareDecl{j.at("morphisms").get<std::array<std::string, 4>>()};
      break;
    case DeclKind::Diagram: {
      DiagramDecl g;
      for (const auto& n : j.at("nodes")) g.nodes.push_back({n.at("name").get<std::string>(), n.at("theory").get<std::string>()});
      for (const auto& e : j.at("edges"))
        g.edges.push_back(
            {e.at("morphism").get<std::string>(), e.at("from").get<std::string>(), e.at("to").get<std::string>()});
      d.value = g;
      break;
    }
  }
  return d;
}

}  // namespace detail

/// Structural problems raise ValidationError naming the declaration index;
/// malformed JSON text raises ParseError.
inline SpecDocument from_json(const json& j) {
  SpecDocument doc;
  DocumentBuilder b(doc);
  if (j.contains("msa_system")) b.set_system(msa::parse_inclusion_kind(j.at("msa_system").get<std::string>()));
  const auto& decls = j.at("declarations");
  for (std::size_t i = 0; i < decls.size(); ++i) {
    try {
      b.add(detail::declaration_from_json(doc, decls[i]));
    } catch (const json::exception& e) {
      throw ValidationError("declaration " + std::to_string(i) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ValidationError("declaration " + std::to_string(i) + ": sentence " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("declaration " + std::to_string(i) + ": " + e.what());
    } catch (const ContractError& e) {
      throw ValidationError("declaration " + std::to_string(i) + ": " + e.what());
    }
  }
  return doc;
}

inline SpecDocument from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1, e.byte);
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(e.what());
  }
}

}  // namespace blendkit::dsl
