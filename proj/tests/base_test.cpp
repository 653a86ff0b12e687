// PL and MSA base institutions and their inclusion systems.

#include <gtest/gtest.h>

#include "blendkit/dsl.hpp"
#include "blendkit/laws.hpp"
#include "blendkit/random.hpp"
#include "support/oracles.hpp"

using namespace blendkit;

namespace {

pl::Morphism pmap(pl::Signature s, pl::Signature t, std::map<std::string, std::string> m) {
  return {std::move(s), std::move(t), std::move(m)};
}

pl::Model pmodel(pl::Signature s, std::set<std::string> truths) { return {std::move(s), std::move(truths)}; }

pl::Sentence psen(const std::string& text, const pl::Signature& s) { return dsl::parse_pl_sentence(text, s); }

msa::OpDecl op(std::string name, std::vector<std::string> args, std::string result) {
  return {std::move(name), std::move(args), std::move(result)};
}

}  // namespace

// ---------------------------------------------------------------------------
// PL

TEST(PlSentences, TranslateCollapsesSymbols) {
  pl::Signature s{"p", "q"}, t{"a"};
  auto phi = pmap(s, t, {{"p", "a"}, {"q", "a"}});
  EXPECT_EQ(pl::translate(phi, psen("p & !q", s)), psen("a & !a", t));
  EXPECT_EQ(pl::translate(pmap({"p"}, t, {{"p", "a"}}), psen("!!p", {"p"})), psen("!!a", t));
  EXPECT_EQ(pl::translate(pl::identity(s), psen("p & q", s)), psen("p & q", s));
}

TEST(PlSentences, TranslatorSkipsUndefinedSymbols) {
  pl::Translator tr(pmap({"p"}, {"a"}, {{"p", "a"}}));
  EXPECT_FALSE(tr(psen("p & q", {"p", "q"})).has_value());
  EXPECT_EQ(*tr(psen("!p", {"p"})), psen("!a", {"a"}));
}

TEST(PlModels, Reduct) {
  pl::Signature s{"p", "q"}, t{"a", "b"};
  EXPECT_EQ(pl::reduct(pmap(s, {"a"}, {{"p", "a"}, {"q", "a"}}), pmodel({"a"}, {"a"})).truths,
            (std::set<std::string>{"p", "q"}));
  EXPECT_EQ(pl::reduct(pmap(s, t, {{"p", "a"}, {"q", "b"}}), pmodel(t, {"a"})).truths, (std::set<std::string>{"p"}));
}

TEST(PlModels, Satisfaction) {
  pl::Signature s{"p", "q"};
  EXPECT_TRUE(pl::satisfies(pmodel(s, {"p"}), psen("p & !q", s)));
  EXPECT_TRUE(pl::satisfies(pmodel({"p"}, {}), psen("!p", {"p"})));
  EXPECT_FALSE(pl::satisfies(pmodel(s, {"p"}), psen("p & q", s)));
}

TEST(PlModels, Enumeration) {
  EXPECT_EQ(pl::enumerate_models({}).size(), 1U);
  EXPECT_EQ(pl::enumerate_models({"p"}).size(), 2U);
  EXPECT_EQ(pl::enumerate_models({"p", "q"}).size(), 4U);
  Bounds tight;
  tight.pl_symbol_cap = 3;
  EXPECT_THROW(pl::enumerate_models(pl::canonical_signature(4, "p"), tight), ResourceError);
}

TEST(PlModels, IndexRoundTrip) {
  auto s = pl::canonical_signature(4, "p");
  for (std::uint64_t i = 0; i < 16; ++i) EXPECT_EQ(pl::model_index(pl::model_at(s, i)), i);
}

TEST(PlSlices, SmallDepths) {
  EXPECT_EQ(pl::sentences_up_to_depth({"p"}, 0), std::vector<pl::Sentence>{pl::Sentence::var("p")});
  auto d1 = pl::sentences_up_to_depth({"p"}, 1);
  std::set<pl::Sentence> got(d1.begin(), d1.end());
  auto p = pl::Sentence::var("p");
  EXPECT_EQ(got, (std::set<pl::Sentence>{p, pl::Sentence::neg(p), pl::Sentence::conj(p, p)}));
  EXPECT_TRUE(pl::sentences_up_to_depth({}, 3).empty());
}

TEST(PlSlices, SizesOverFourSymbols) {
  // every sentence of depth exactly d is ¬x with x of depth d-1, or x∧y
  // where the deeper side has depth d-1
  std::vector<std::size_t> exact{4};
  std::vector<std::size_t> upto{4};
  for (int d = 1; d <= 3; ++d) {
    std::size_t e = exact[d - 1];
    std::size_t below = d >= 2 ? upto[d - 2] : 0;
    exact.push_back(e + e * e + 2 * e * below);
    upto.push_back(upto[d - 1] + exact.back());
  }
  EXPECT_EQ(upto, (std::vector<std::size_t>{4, 24, 604, 365424}));
  auto s = pl::canonical_signature(4, "p");
  for (int d = 0; d <= 3; ++d) EXPECT_EQ(pl::sentences_up_to_depth(s, d).size(), upto[d]);
  EXPECT_EQ(pl::slice_size(4, 3, 1'000'000), 365424U);
}

namespace {

/// Truth tables reachable at depth <= `depth` over n symbols: variable
/// tables, closed `depth` times under complement and intersection.
std::set<std::uint64_t> reachable_tables(std::size_t n, int depth) {
  const std::size_t rows = std::size_t{1} << n;
  const std::uint64_t all = rows == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows) - 1;
  std::set<std::uint64_t> level;
  for (std::size_t v = 0; v < n; ++v) {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < rows; ++i)
      if ((i >> v) & 1U) t |= std::uint64_t{1} << i;
    level.insert(t);
  }
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::uint64_t> prev(level.begin(), level.end());
    for (auto t : prev) level.insert(~t & all);
    for (auto a : prev)
      for (auto b : prev) level.insert(a & b);
  }
  return level;
}

std::set<std::uint64_t> representative_tables(std::size_t n, int depth) {
  auto s = pl::canonical_signature(n, "p");
  pl::TableEvaluator ev(s);
  std::set<std::uint64_t> tables;
  for (const auto& r : pl::sentence_representatives(s, depth)) {
    EXPECT_LE(r.depth(), static_cast<std::size_t>(depth));
    EXPECT_TRUE(tables.insert(ev(r).word(0)).second) << "two representatives share a table";
  }
  return tables;
}

}  // namespace

TEST(PlSlices, RepresentativesCoverEveryTable) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (int d = 0; d <= 4; ++d) EXPECT_EQ(representative_tables(n, d), reachable_tables(n, d)) << n << " " << d;
  EXPECT_EQ(representative_tables(4, 4), reachable_tables(4, 4));
}

TEST(PlSlices, TableEvaluatorMatchesDirectEvaluation) {
  Rng rng(11);
  auto s = pl::canonical_signature(4, "p");
  pl::TableEvaluator ev(s);
  for (int i = 0; i < 200; ++i) {
    auto rho = pl::random_sentence(rng, s, 4);
    const auto& t = ev(rho);
    for (std::uint64_t m = 0; m < 16; ++m)
      ASSERT_EQ(t.test(m), oracle::eval(rho, pl::model_at(s, m).truths));
  }
}

// ---------------------------------------------------------------------------
// Set inclusion system

TEST(Sets, Factorization) {
  pl::Sets sets;
  auto f = pmap({"a", "b"}, {"x", "y"}, {{"a", "x"}, {"b", "x"}});
  auto fact = sets.factorize(f);
  EXPECT_EQ(fact.surjection, pmap({"a", "b"}, {"x"}, {{"a", "x"}, {"b", "x"}}));
  EXPECT_EQ(fact.inclusion, pmap({"x"}, {"x", "y"}, {{"x", "x"}}));
  auto id = pl::identity({"p"});
  EXPECT_EQ(sets.factorize(id).surjection, id);
  EXPECT_EQ(sets.factorize(id).inclusion, id);
}

TEST(Sets, RejectsMalformedMorphism) {
  pl::Sets sets;
  EXPECT_THROW(sets.factorize(pmap({"a"}, {"x"}, {{"a", "z"}})), ValidationError);
  EXPECT_THROW(sets.factorize(pmap({"a", "b"}, {"x"}, {{"a", "x"}})), ValidationError);
  msa::Signatures strong;
  msa::Signature s{{"s"}, {op("c", {}, "s")}};
  EXPECT_THROW(strong.factorize(msa::Morphism{s, {{"t"}, {}}, {{"s", "t"}}, {{op("c", {}, "s"), "d"}}}),
               ValidationError);
}

TEST(Sets, SemiInclusivePullback) {
  pl::Sets sets;
  pl::Signature a{"1", "2", "3"}, b{"x", "y"};
  auto f = pmap(a, b, {{"1", "x"}, {"2", "y"}, {"3", "x"}});
  auto sq = semi_inclusive_pullback(sets, f, *sets.inclusion({"x"}, b));
  EXPECT_EQ(sq.left.source, (pl::Signature{"1", "3"}));
  EXPECT_EQ(sq.bottom.map, (std::map<std::string, std::string>{{"1", "x"}, {"3", "x"}}));
  auto full = semi_inclusive_pullback(sets, f, pl::identity(b));
  EXPECT_EQ(full.bottom, f);
  EXPECT_THROW(semi_inclusive_pullback(sets, f, pmap(b, b, {{"x", "y"}, {"y", "x"}})), ContractError);
}

TEST(Sets, Stability) {
  pl::Sets sets;
  pl::Signature a{"1", "2", "3"}, b{"x", "y"};
  auto f = pmap(a, b, {{"1", "x"}, {"2", "y"}, {"3", "x"}});
  EXPECT_TRUE(check_stability(sets, f, *sets.inclusion({"x"}, b)).empty());
  auto g = pmap({"1"}, b, {{"1", "x"}});
  EXPECT_TRUE(check_surjection_stability(sets, semi_inclusive_pullback(sets, g, *sets.inclusion({"y"}, b))));
}

TEST(Sets, Pushout) {
  pl::Sets sets;
  auto k = sets.pushout(pmap({"c"}, {"h"}, {{"c", "h"}}), pmap({"c"}, {"b"}, {{"c", "b"}}));
  EXPECT_EQ(k.left_leg.target, (pl::Signature{"b"}));
  EXPECT_EQ(k.left_leg.map.at("h"), "b");
  EXPECT_EQ(k.right_leg.map.at("b"), "b");
  EXPECT_TRUE(cocone_commutes(sets, k));

  auto id = pl::identity({"p"});
  auto trivial = sets.pushout(id, id);
  EXPECT_EQ(trivial.left_leg, id);
  EXPECT_EQ(trivial.right_leg, id);

  auto coproduct = sets.pushout(pmap({}, {"p", "q"}, {}), pmap({}, {"p"}, {}));
  EXPECT_EQ(coproduct.left_leg.target.size(), 3U);
  EXPECT_NE(coproduct.left_leg.map.at("p"), coproduct.right_leg.map.at("p"));
}

// ---------------------------------------------------------------------------
// MSA

namespace {

struct Succ {
  msa::Signature sig{{"s"}, {op("c", {}, "s"), op("f", {"s"}, "s")}};
  msa::Algebra alg{sig, {{"s", 2}}, {{op("c", {}, "s"), {1}}, {op("f", {"s"}, "s"), {1, 0}}}};
};

}  // namespace

TEST(MsaTerms, Evaluation) {
  Succ z;
  auto c = msa::Term::apply(op("c", {}, "s"));
  auto f = [](msa::Term t) { return msa::Term::apply(op("f", {"s"}, "s"), {std::move(t)}); };
  EXPECT_EQ(msa::term_eval(z.alg, c), 1);
  EXPECT_EQ(msa::term_eval(z.alg, f(c)), 0);
  EXPECT_EQ(msa::term_eval(z.alg, f(f(c))), 1);
  EXPECT_THROW(msa::term_eval(z.alg, msa::Term::variable("x", "s")), ContractError);
}

TEST(MsaSentences, Satisfaction) {
  msa::Signature one{{"s"}, {}};
  auto x = msa::Term::variable("x", "s");
  auto refl = msa::Sentence::forall({{"x", "s"}}, msa::Sentence::eq(x, x));
  auto inhabited = msa::Sentence::exists({{"x", "s"}}, msa::Sentence::eq(x, x));
  msa::Algebra empty{one, {{"s", 0}}, {}};
  EXPECT_TRUE(msa::satisfies(empty, refl));
  EXPECT_FALSE(msa::satisfies(empty, inhabited));

  msa::Signature with_f{{"s"}, {op("f", {"s"}, "s")}};
  msa::Algebra id{with_f, {{"s", 2}}, {{op("f", {"s"}, "s"), {0, 1}}}};
  auto fx = msa::Term::apply(op("f", {"s"}, "s"), {x});
  EXPECT_TRUE(msa::satisfies(id, msa::Sentence::forall({{"x", "s"}}, msa::Sentence::eq(fx, x))));
  Succ z;
  EXPECT_FALSE(msa::satisfies(z.alg, dsl::parse_msa_sentence("forall x:s . f(x) = x", z.sig)));
  EXPECT_TRUE(msa::satisfies(z.alg, dsl::parse_msa_sentence("!(f(c) = c)", z.sig)));
}

TEST(MsaSentences, Translation) {
  msa::Signature s{{"s"}, {op("sigma", {"s"}, "s")}}, t{{"t"}, {op("tau", {"t"}, "t")}};
  msa::Morphism phi{s, t, {{"s", "t"}}, {{op("sigma", {"s"}, "s"), "tau"}}};
  EXPECT_EQ(msa::translate(phi, dsl::parse_msa_sentence("forall x:s . sigma(x) = x", s)),
            dsl::parse_msa_sentence("forall x:t . tau(x) = x", t));
  EXPECT_EQ(msa::translate(msa::identity(s), dsl::parse_msa_sentence("forall x:s . x = x", s)),
            dsl::parse_msa_sentence("forall x:s . x = x", s));

  msa::Signature two{{"s1", "s2"}, {}};
  msa::Morphism collapse{two, {{"t"}, {}}, {{"s1", "t"}, {"s2", "t"}}, {}};
  EXPECT_EQ(msa::translate(collapse, dsl::parse_msa_sentence("forall x:s1 . x = x", two)),
            dsl::parse_msa_sentence("forall x:t . x = x", {{"t"}, {}}));
}

TEST(MsaModels, Reduct) {
  msa::Signature two{{"s1", "s2"}, {}}, t{{"t"}, {}};
  msa::Morphism collapse{two, t, {{"s1", "t"}, {"s2", "t"}}, {}};
  auto r = msa::reduct(collapse, msa::Algebra{t, {{"t", 2}}, {}});
  EXPECT_EQ(r.carriers, (std::map<std::string, int>{{"s1", 2}, {"s2", 2}}));
  Succ z;
  EXPECT_EQ(msa::reduct(msa::identity(z.sig), z.alg), z.alg);
}

TEST(MsaModels, Enumeration) {
  EXPECT_EQ(msa::enumerate_algebras({{"s"}, {}}, 1).size(), 2U);
  EXPECT_EQ(msa::enumerate_algebras({{}, {}}, 3).size(), 1U);
  auto constant = msa::enumerate_algebras({{"s"}, {op("c", {}, "s")}}, 1);
  ASSERT_EQ(constant.size(), 1U);
  EXPECT_EQ(constant.front().carrier("s"), 1);
  // one sort, one unary op, carriers up to 2: 1 + 1 + 4
  EXPECT_EQ(msa::enumerate_algebras({{"s"}, {op("f", {"s"}, "s")}}, 2).size(), 6U);
  EXPECT_THROW(msa::enumerate_algebras({{"s"}, {op("f", {"s", "s"}, "s")}}, 3, 100), ResourceError);
}

TEST(MsaSystems, InclusionTableRows) {
  msa::Signatures closed(msa::InclusionKind::Closed), strong(msa::InclusionKind::Strong),
      nearly(msa::InclusionKind::NearlyStrong);
  msa::Signature s{{"s"}, {}}, st{{"s", "t"}, {}};
  EXPECT_TRUE(closed.inclusion(s, st).has_value());
  EXPECT_FALSE(nearly.inclusion(s, st).has_value());
  msa::Signature one{{"s"}, {op("sigma", {}, "s")}}, both{{"s"}, {op("sigma", {}, "s"), op("tau", {}, "s")}};
  EXPECT_TRUE(strong.inclusion(one, both).has_value());
  // τ has a rank inside {s}, so a closed inclusion would have to keep it
  EXPECT_FALSE(closed.inclusion(one, both).has_value());
  EXPECT_TRUE(nearly.inclusion(one, both).has_value());
}

TEST(MsaSystems, StrongFactorization) {
  msa::Signatures strong(msa::InclusionKind::Strong);
  msa::Signature s{{"s"}, {op("sigma", {}, "s")}};
  msa::Signature t{{"t"}, {op("sigma'", {}, "t"), op("tau", {}, "t")}};
  msa::Morphism phi{s, t, {{"s", "t"}}, {{op("sigma", {}, "s"), "sigma'"}}};
  auto fact = strong.factorize(phi);
  EXPECT_EQ(fact.surjection.target, (msa::Signature{{"t"}, {op("sigma'", {}, "t")}}));
  EXPECT_TRUE(strong.is_inclusion(fact.inclusion));
  EXPECT_EQ(fact.inclusion.target, t);
  EXPECT_TRUE(check_factorization(strong, phi).empty());
}

TEST(MsaSystems, PullbackSortFormula) {
  msa::Signatures closed(msa::InclusionKind::Closed);
  msa::Signature s{{"u", "v"}, {}}, s1{{"m", "n"}, {}};
  msa::Morphism phi{s, s1, {{"u", "m"}, {"v", "n"}}, {}};
  auto sq = semi_inclusive_pullback(closed, phi, *closed.inclusion({{"m"}, {}}, s1));
  EXPECT_EQ(sq.left.source.sorts, (std::set<std::string>{"u"}));
}

TEST(MsaSystems, StabilityExample) {
  msa::Signatures strong(msa::InclusionKind::Strong);
  msa::Signature s{{"u", "v"}, {op("a", {}, "u"), op("b", {}, "v")}};
  msa::Signature t{{"m"}, {op("c", {}, "m")}};
  msa::Morphism phi{s, t, {{"u", "m"}, {"v", "m"}}, {{op("a", {}, "u"), "c"}, {op("b", {}, "v"), "c"}}};
  ASSERT_TRUE(strong.is_surjection(phi));
  EXPECT_TRUE(check_stability(strong, phi, msa::identity(t)).empty());
  EXPECT_TRUE(check_stability(strong, phi, *strong.inclusion({{"m"}, {}}, t)).empty());
}

TEST(MsaSystems, PushoutCommutes) {
  Rng rng(5);
  for (auto kind : {msa::InclusionKind::Closed, msa::InclusionKind::Strong, msa::InclusionKind::NearlyStrong}) {
    msa::Signatures sys(kind);
    for (int i = 0; i < 50; ++i) {
      auto s0 = msa::random_signature(rng, 1, 2, 3, 2, "s");
      auto k = sys.pushout(msa::random_morphism_from(rng, s0, "a"), msa::random_morphism_from(rng, s0, "b"));
      EXPECT_TRUE(cocone_commutes(sys, k)) << sys.name();
    }
  }
}

// ---------------------------------------------------------------------------
// Randomized laws of the three MSA systems and Sets

TEST(InclusionLaws, RandomizedAcrossSystems) {
  Rng rng(2024);
  pl::Sets sets;
  for (int i = 0; i < 300; ++i) {
    auto f = pl::random_morphism(rng, pl::random_signature(rng, 0, 5, "a"), pl::random_signature(rng, 1, 5, "b"));
    ASSERT_EQ(check_factorization(sets, f), "");
    ASSERT_EQ(check_pullback(sets, f, *sets.inclusion(pl::random_subset(rng, f.target), f.target)), "");
  }
  for (auto kind : {msa::InclusionKind::Closed, msa::InclusionKind::Strong, msa::InclusionKind::NearlyStrong}) {
    msa::Signatures sys(kind);
    for (int i = 0; i < 200; ++i) {
      auto f = msa::random_morphism_from(rng, msa::random_signature(rng, 1, 3, 3, 2, "s"), "t");
      ASSERT_EQ(check_factorization(sys, f), "") << sys.name();
      auto sub = msa::random_subobject(rng, sys, f.target);
      ASSERT_EQ(check_pullback(sys, f, *sys.inclusion(sub, f.target)), "") << sys.name();
    }
  }
}
