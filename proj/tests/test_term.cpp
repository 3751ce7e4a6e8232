#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rolec/parse.hpp"
#include "rolec/rewrite.hpp"
#include "rolec/term.hpp"
#include "support/gen.hpp"

using namespace rolec;

namespace {
const DeductionSystem& dy() {
  static DeductionSystem d = builtin_dolev_yao();
  return d;
}
}  // namespace

TEST_CASE("parse_term builds the expected structure") {
  Term t = parse_term("enc(pair(A,Na),KB)", dy().sig);
  REQUIRE(t.is_fun());
  REQUIRE(t.name == "enc");
  REQUIRE(t.args.size() == 2);
  CHECK(t.args[0] == Term::fun("pair", {Term::constant("A"),
                                        Term::constant("Na")}));
  CHECK(t.args[1] == Term::constant("KB"));

  CHECK(parse_term("A", dy().sig) == Term::constant("A"));
  CHECK(parse_term(" enc ( A , B ) ", dy().sig) ==
        Term::fun("enc", {Term::constant("A"), Term::constant("B")}));
}

TEST_CASE("parse_term rejects bad input") {
  CHECK_THROWS_AS(parse_term("dec(enc(X,Y))", dy().sig), ParseError);  // arity
  CHECK_THROWS_AS(parse_term("pair(A,)", dy().sig), ParseError);
  CHECK_THROWS_AS(parse_term("pair(A", dy().sig), ParseError);
  CHECK_THROWS_AS(parse_term("", dy().sig), ParseError);
  CHECK_THROWS_AS(parse_term("A B", dy().sig), ParseError);
  CHECK_THROWS_AS(parse_term("x_1", dy().sig), ParseError);  // reserved
  CHECK_THROWS_AS(parse_term("v_12", dy().sig), ParseError);
  CHECK_THROWS_AS(parse_term("foo(A)", dy().sig), ParseError);  // undeclared
}

TEST_CASE("parse error carries a position") {
  try {
    parse_term("pair(A,", dy().sig);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 7);
  }
}

TEST_CASE("apply_substitution") {
  Substitution s{{"x", Term::constant("Na")}};
  CHECK(apply_substitution(Term::var("x"), s) == Term::constant("Na"));

  Term t = Term::fun("enc", {Term::var("x"), Term::var("y")});
  Term r = apply_substitution(t, s);
  CHECK(r == Term::fun("enc", {Term::constant("Na"), Term::var("y")}));

  Term g = parse_term("enc(pair(A,Na),KB)", dy().sig);
  CHECK(apply_substitution(g, s) == g);
}

TEST_CASE("substitution laws on random terms") {
  gen::Rng rng(7);
  std::vector<std::string> atoms{"a", "b", "c"};
  Substitution s{{"x", Term::constant("a")},
                 {"y", Term::fun("pair", {Term::constant("b"),
                                          Term::constant("c")})}};
  REQUIRE(is_idempotent(s));
  for (int i = 0; i < 200; ++i) {
    Term t = gen::dy_term(rng, atoms, 3);
    if (gen::chance(rng, 0.5)) t = Term::fun("pair", {t, Term::var("x")});
    if (gen::chance(rng, 0.3)) t = Term::fun("enc", {Term::var("y"), t});
    // homomorphism
    if (t.is_fun()) {
      Term whole = apply_substitution(t, s);
      for (std::size_t k = 0; k < t.args.size(); ++k)
        CHECK(whole.args[k] == apply_substitution(t.args[k], s));
    }
    // idempotence
    Term once = apply_substitution(t, s);
    CHECK(apply_substitution(once, s) == once);
  }
}

TEST_CASE("instantiate_context") {
  PositiveStrand s{Term::constant("a"), Term::constant("b")};
  CHECK(instantiate_context(Term::hole(2), s) == Term::constant("b"));
  CHECK(instantiate_context(Term::hole(1), {Term::constant("Na")}) ==
        Term::constant("Na"));

  PositiveStrand s2{parse_term("enc(a,k)", dy().sig),
                    parse_term("inv(k)", dy().sig)};
  Term plugged = instantiate_context(
      Term::fun("dec", {Term::hole(1), Term::hole(2)}), s2);
  CHECK(plugged == parse_term("dec(enc(a,k),inv(k))", dy().sig));

  CHECK_THROWS_AS(instantiate_context(Term::hole(3), s), std::out_of_range);
}

TEST_CASE("hole projection equals the strand message") {
  gen::Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    PositiveStrand s = gen::dy_strand(rng, 5, 2);
    for (std::size_t k = 0; k < s.size(); ++k)
      CHECK(instantiate_context(Term::hole(static_cast<int>(k) + 1), s) == s[k]);
  }
}

TEST_CASE("subterms and dag_size") {
  Term t = parse_term("enc(pair(A,Na),KB)", dy().sig);
  std::set<Term> st = subterms(t);
  CHECK(st.size() == 5);
  CHECK(st.count(t) == 1);
  CHECK(st.count(Term::constant("Na")) == 1);
  CHECK(dag_size(t) == 5);

  CHECK(subterms(Term::constant("a")).size() == 1);
  CHECK(dag_size(Term::constant("a")) == 1);
  CHECK(dag_size(parse_term("pair(a,a)", dy().sig)) == 2);

  gen::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    Term u = gen::dy_term(rng, {"a", "b"}, 3);
    CHECK(dag_size(u) == subterms(u).size());
  }
}

TEST_CASE("is_context") {
  CHECK(is_context(Term::fun("dec", {Term::hole(1), Term::hole(2)}), dy().sig));
  CHECK_FALSE(is_context(Term::fun("enc", {Term::hole(1), Term::constant("KB")}),
                         dy().sig));
  CHECK_FALSE(is_context(Term::fun("inv", {Term::hole(1)}), dy().sig));  // private
  CHECK(is_context(Term::fun("true"), dy().sig));
}

TEST_CASE("print then parse is the identity") {
  gen::Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    Term t = gen::dy_term(rng, {"a", "b", "K1"}, 3);
    CHECK(parse_term(to_string(t), dy().sig) == t);
  }
  // and for recipes with holes
  Term c = Term::fun("msg", {Term::hole(3), Term::fun("enc", {Term::hole(1),
                                                              Term::hole(5)})});
  CHECK(parse_recipe(to_string(c), dy().sig) == c);
  CHECK(parse_recipe(to_string(c, HoleStyle::Frame), dy().sig) == c);
}

TEST_CASE("strands") {
  Strand s;
  s.steps.push_back({true, Term::constant("a")});
  s.steps.push_back({false, Term::constant("b")});
  CHECK_FALSE(s.positive());
  s.steps[1].send = true;
  CHECK(s.positive());
  CHECK(positive_messages(s) ==
        PositiveStrand{Term::constant("a"), Term::constant("b")});
}
