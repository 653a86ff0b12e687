// Specification language, JSON form and the command-line front end.

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "blendkit/cli.hpp"
#include "blendkit/dsl.hpp"
#include "blendkit/json_io.hpp"
#include "support/documents.hpp"

using namespace blendkit;

namespace {

template <class T>
const T& value(const dsl::SpecDocument& doc, dsl::DeclKind k, const std::string& name) {
  return std::get<T>(doc.get(k, name).value);
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& text, std::string command, std::vector<std::string> args = {},
        std::function<void(cli::Invocation&)> tweak = {}) {
  cli::Invocation inv;
  inv.command = std::move(command);
  inv.args = std::move(args);
  if (tweak) tweak(inv);
  std::ostringstream out, err;
  int code = cli::run(inv, out, err, text);
  return {code, out.str(), err.str()};
}

std::string spec_file(const std::string& name) {
  std::ifstream in(std::string(BLENDKIT_SPECS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing and serialization

TEST(Dsl, EmptyDocument) {
  auto doc = dsl::parse("");
  EXPECT_TRUE(doc.declarations.empty());
  EXPECT_FALSE(doc.msa_system.has_value());
  EXPECT_EQ(dsl::parse("# only a comment\n"), doc);
}

TEST(Dsl, PartialMorphismDeclaration) {
  auto doc = dsl::parse("sig P = {p,q}\npmorph f : P -> P on {p} { p |-> q }\n");
  EXPECT_EQ(doc.count(dsl::DeclKind::Signature), 1U);
  const auto& f = value<dsl::PLPartial>(doc, dsl::DeclKind::PartialMorphism, "f");
  EXPECT_EQ(f.witness.source, (pl::Signature{"p"}));
  EXPECT_EQ(f.total.map, (std::map<std::string, std::string>{{"p", "q"}}));
  EXPECT_EQ(f.total.target, (pl::Signature{"p", "q"}));
}

TEST(Dsl, ErrorsCarryPositionAndName) {
  try {
    dsl::parse("sig P = {p}\nmorph f : P -> Q { p |-> p }\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    std::string what = e.what();
    EXPECT_NE(what.find("Q"), std::string::npos) << what;
    EXPECT_NE(what.find("2:"), std::string::npos) << what;
  }
  EXPECT_THROW(dsl::parse("sig P = {p"), ParseError);
  EXPECT_THROW(dsl::parse("sig P = {p}\nsentence s : P = q\n"), ParseError);
  EXPECT_THROW(dsl::parse("sig P = {p}\nsig P = {q}\n"), ParseError);
}

TEST(Dsl, MsaDeclarations) {
  auto doc = dsl::parse(spec_file("stack.bk"));
  EXPECT_EQ(doc.system(), msa::InclusionKind::Strong);
  const auto& nat = value<msa::Signature>(doc, dsl::DeclKind::Signature, "Nat");
  EXPECT_EQ(nat.ops.size(), 2U);
  const auto& z2 = value<msa::Algebra>(doc, dsl::DeclKind::Model, "Z2");
  EXPECT_TRUE(msa::satisfies(z2, value<msa::Sentence>(doc, dsl::DeclKind::Sentence, "noFix")));
}

TEST(Dsl, RoundTripOnShippedSpecs) {
  for (const auto* name : {"houseboat.bk", "modstrict.bk", "stack.bk"}) {
    auto doc = dsl::parse(spec_file(name));
    auto text = dsl::serialize(doc);
    EXPECT_EQ(dsl::parse(text), doc) << name;
    EXPECT_EQ(dsl::serialize(dsl::parse(text)), text) << name;
    EXPECT_EQ(dsl::from_json(dsl::to_json(doc)), doc) << name;
  }
}

TEST(Dsl, RandomDocumentsRoundTrip) {
  Rng rng(31);
  for (int i = 0; i < 40; ++i) {
    auto doc = testgen::random_document(rng);
    auto text = dsl::serialize(doc);
    auto back = dsl::parse(text);
    ASSERT_EQ(back, doc) << text;
    ASSERT_EQ(dsl::serialize(back), text);
    ASSERT_EQ(dsl::from_json_text(dsl::to_json(doc).dump()), doc);
  }
}

TEST(Json, RejectsMalformedInput) {
  EXPECT_THROW(dsl::from_json_text("{"), ParseError);
  // well-formed JSON with bad content is a validation error
  EXPECT_THROW(dsl::from_json_text(R"({"declarations": [{"kind": "nonsense"}]})"), ValidationError);
}

// ---------------------------------------------------------------------------
// Command line

TEST(Cli, ValidateAndExitCodes) {
  auto text = spec_file("houseboat.bk");
  EXPECT_EQ(run(text, "validate").code, cli::Ok);
  EXPECT_EQ(run("sig P = {", "validate").code, cli::InputError);
  EXPECT_EQ(run(text, "blend", {"Nope"}).code, cli::InputError);
  EXPECT_EQ(run(text, "compose", {"toHouse"}).code, cli::InputError);
}

TEST(Cli, Blend) {
  auto r = run(spec_file("houseboat.bk"), "blend", {"HB"});
  ASSERT_EQ(r.code, cli::Ok) << r.err;
  EXPECT_NE(r.out.find("strict: [true,false]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("witnesses: [true,true]"), std::string::npos) << r.out;
  auto j = run(spec_file("houseboat.bk"), "blend", {"HB"}, [](cli::Invocation& i) { i.json = true; });
  ASSERT_EQ(j.code, cli::Ok);
  auto parsed = nlohmann::json::parse(j.out);
  EXPECT_EQ(parsed.at("strict"), nlohmann::json::parse("[true,false]"));
  auto dot = run(spec_file("houseboat.bk"), "blend", {"HB"}, [](cli::Invocation& i) { i.dot = true; });
  EXPECT_EQ(dot.out.rfind("digraph", 0), 0U) << dot.out;
}

TEST(Cli, AmalgamateAndConsistency) {
  auto text = spec_file("houseboat.bk");
  auto a = run(text, "amalgamate", {"HB", "G0", "H1", "B1"});
  ASSERT_EQ(a.code, cli::Ok) << a.err;
  EXPECT_NE(a.out.find("unique: true"), std::string::npos) << a.out;
  auto c = run(text, "consistent", {"Blend"});
  EXPECT_EQ(c.code, cli::Ok) << c.err;
}

TEST(Cli, SatisfyAlongMorphisms) {
  auto text = spec_file("stack.bk");
  EXPECT_EQ(run(text, "satisfy", {"Z2", "noFix"}).code, cli::Ok);
  // zeroSucc mentions succ, which is outside the domain of forgetSucc
  auto r = run(text, "satisfy", {"forgetSucc", "S2", "zeroSucc"});
  EXPECT_EQ(r.code, cli::Ok) << r.err;
  EXPECT_NE(r.out.find("translation: undefined"), std::string::npos) << r.out;
  auto ok = run(text, "satisfy", {"inc", "S2", "noFix"});
  EXPECT_EQ(ok.code, cli::Ok) << ok.err;
  EXPECT_NE(ok.out.find("violations: 0"), std::string::npos) << ok.out;
}

TEST(Cli, ModStrictExample) {
  auto text = spec_file("modstrict.bk");
  auto r = run(text, "reduct", {"phi", "MA"});
  ASSERT_EQ(r.code, cli::Ok) << r.err;
  EXPECT_NE(r.out.find("count: 2"), std::string::npos) << r.out;
}

TEST(Cli, ResourceCap) {
  auto capped = run("msa sig S = sorts {s} ops { f : s s s -> s }\nsentence t : S = forall x:s . f(x, x, x) = x\n",
                    "entails", {"S", "t"}, [](cli::Invocation& i) { i.max_carrier = 6; });
  EXPECT_EQ(capped.code, cli::ResourceCap) << capped.err << capped.out;
}

TEST(Cli, VerifyLaws) {
  cli::Invocation inv;
  inv.command = "verify-laws";
  inv.seed = 7;
  inv.iterations = 25;
  std::ostringstream a, b, err;
  EXPECT_EQ(cli::run(inv, a, err), cli::Ok) << err.str();
  EXPECT_EQ(cli::run(inv, b, err), cli::Ok);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().find("FAIL"), std::string::npos) << a.str();
}

TEST(Cli, ConfigValidation) {
  auto r = run("", "validate", {}, [](cli::Invocation& i) { i.max_carrier = -1; });
  EXPECT_EQ(r.code, cli::InputError);
}
