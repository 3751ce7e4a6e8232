#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "rolec/rewrite.hpp"
#include "support/gen.hpp"

using namespace rolec;

namespace {
const DeductionSystem& dy() {
  static DeductionSystem d = builtin_dolev_yao();
  return d;
}
Term T(const std::string& s) { return parse_term(s, dy().sig); }

// Leftmost-outermost single step; the engine itself is innermost, so this
// gives an independent reduction strategy for the confluence property.
std::optional<Term> outermost_step(const Term& t, const DeductionSystem& d) {
  for (const RewriteRule& r : d.rules) {
    Substitution sigma;
    if (match(r.lhs, t, sigma)) return apply_substitution(r.rhs, sigma);
  }
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (auto stepped = outermost_step(t.args[i], d)) {
      Term u = t;
      u.args[i] = std::move(*stepped);
      return u;
    }
  }
  return std::nullopt;
}

Term outermost_normalize(Term t, const DeductionSystem& d) {
  for (int guard = 0; guard < 10000; ++guard) {
    auto stepped = outermost_step(t, d);
    if (!stepped) return t;
    t = std::move(*stepped);
  }
  FAIL("outermost rewriting did not terminate");
  return t;
}
}  // namespace

TEST_CASE("normalize applies the Dolev-Yao rules") {
  CHECK(normalize(T("dec(enc(Nb,KB),inv(KB))"), dy()) == T("Nb"));
  CHECK(normalize(T("proj2(pair(Na,Nb))"), dy()) == T("Nb"));
  CHECK(normalize(T("a"), dy()) == T("a"));
  CHECK(normalize(T("symtest(enc(m,k),k)"), dy()) == T("true"));
  CHECK(normalize(T("pairtest(pair(m,k))"), dy()) == T("true"));
  CHECK(normalize(T("partner(msg(B,Na))"), dy()) == T("B"));
  CHECK(normalize(T("payload(msg(B,Na))"), dy()) == T("Na"));
  // nested redexes, innermost first
  CHECK(normalize(T("proj1(pair(dec(enc(a,k),inv(k)),b))"), dy()) == T("a"));
  // stuck terms stay stuck
  CHECK(normalize(T("dec(a,b)"), dy()) == T("dec(a,b)"));
  CHECK(normalize(T("dec(enc(a,k),k)"), dy()) == T("dec(enc(a,k),k)"));
}

TEST_CASE("normalize is idempotent and sound for equal_mod") {
  gen::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    PositiveStrand s = gen::dy_strand(rng, 3, 3);
    Term t = s[0];
    Term n1 = normalize(t, dy());
    CHECK(normalize(n1, dy()) == n1);
    CHECK(equal_mod(t, n1, dy()));
  }
}

TEST_CASE("equal_mod") {
  CHECK(equal_mod(T("dec(enc(Nb,KB),inv(KB))"), T("Nb"), dy()));
  CHECK_FALSE(equal_mod(T("Na"), T("Nb"), dy()));
  CHECK(equal_mod(T("symtest(enc(m,k),k)"), T("true"), dy()));

  gen::Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    Term a = gen::dy_term(rng, {"a", "b", "k"}, 3);
    Term b = gen::dy_term(rng, {"a", "b", "k"}, 3);
    Term c = gen::dy_term(rng, {"a", "b", "k"}, 3);
    CHECK(equal_mod(a, a, dy()));                      // reflexive
    CHECK(equal_mod(a, b, dy()) == equal_mod(b, a, dy()));  // symmetric
    if (equal_mod(a, b, dy()) && equal_mod(b, c, dy()))
      CHECK(equal_mod(a, c, dy()));  // transitive
    // congruence
    if (equal_mod(a, b, dy()))
      CHECK(equal_mod(Term::fun("pair", {a, c}), Term::fun("pair", {b, c}),
                      dy()));
  }
}

TEST_CASE("confluence at desk scale: random reduction orders agree") {
  // Innermost vs outermost-ish: normalize args in reverse and root-first
  // rewriting must end at the same normal form on a validated theory.
  gen::Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    Term t = gen::dy_term(rng, {"a", "k"}, 3);
    Term nested = Term::fun(
        "proj1", {Term::fun("pair", {t, Term::fun("dec", {t, t})})});
    Term once = normalize(nested, dy());
    // A second traversal from a structurally different but E-equal start.
    Term wrapped = normalize(
        Term::fun("proj2", {Term::fun("pair", {Term::constant("junk"), nested})}),
        dy());
    CHECK(once == wrapped);
  }
}

TEST_CASE("validate_subterm_convergent accepts the shipped theory") {
  ValidationReport r = validate_subterm_convergent(dy());
  INFO(r.to_string());
  CHECK(r.accepted);
}

TEST_CASE("validate rejects a non-subterm right side") {
  DeductionSystem d;
  d.name = "bad";
  d.sig.declare("f", 1, true);
  d.sig.declare("g", 1, true);
  d.rules.push_back({Term::fun("f", {Term::var("x")}),
                     Term::fun("g", {Term::var("x")})});
  ValidationReport r = validate_subterm_convergent(d);
  CHECK_FALSE(r.accepted);
}

TEST_CASE("validate rejects a non-joinable overlap") {
  DeductionSystem d;
  d.name = "bad2";
  d.sig.declare("f", 1, true);
  Term a = Term::constant("a");
  d.rules.push_back({Term::fun("f", {a}), Term::constant("b")});
  d.rules.push_back({Term::fun("f", {a}), Term::constant("c")});
  ValidationReport r = validate_subterm_convergent(d);
  CHECK_FALSE(r.accepted);
}

TEST_CASE("validate rejects fresh variables and reducible ground sides") {
  DeductionSystem d;
  d.name = "bad3";
  d.sig.declare("f", 1, true);
  d.sig.declare("g", 1, true);
  d.rules.push_back({Term::fun("f", {Term::var("x")}), Term::var("y")});
  CHECK_FALSE(validate_subterm_convergent(d).accepted);

  DeductionSystem d2;
  d2.name = "bad4";
  d2.sig.declare("f", 1, true);
  d2.sig.declare("g", 1, true);
  Term a = Term::constant("a");
  // g(x) -> a, f(x) -> g(a): the second right side is ground but reducible.
  d2.rules.push_back({Term::fun("g", {Term::var("x")}), a});
  d2.rules.push_back({Term::fun("f", {Term::var("x")}), Term::fun("g", {a})});
  CHECK_FALSE(validate_subterm_convergent(d2).accepted);
}

TEST_CASE("theory file round trip") {
  std::string text = R"(# a comment
theory toy
vars X Y
public h/1 f/2 c/0
private sk/1
rule f(X,sk(Y)) -> X
end
)";
  DeductionSystem d = parse_theory(text);
  CHECK(d.name == "toy");
  CHECK(d.rules.size() == 1);
  CHECK(d.sig.find("h")->is_public);
  CHECK_FALSE(d.sig.find("sk")->is_public);
  CHECK(d.rules[0].lhs ==
        Term::fun("f", {Term::var("X"), Term::fun("sk", {Term::var("Y")})}));
  CHECK(validate_subterm_convergent(d).accepted);
}

TEST_CASE("theory file errors") {
  CHECK_THROWS_AS(parse_theory("theory t\nrule f(X) ->\n"), TheoryError);
  CHECK_THROWS_AS(parse_theory("public f/2\nend\n"), TheoryError);
  CHECK_THROWS_AS(parse_theory("theory t\nbogus line\nend\n"), TheoryError);
  CHECK_THROWS_AS(parse_theory("theory t\npublic f/x\nend\n"), TheoryError);
}

TEST_CASE("parse_theory matches the built-in dolev_yao") {
  std::ifstream in(std::string(ROLEC_PROTOCOL_DIR) + "/dolev_yao.thy");
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  DeductionSystem file = parse_theory(buf.str());
  const DeductionSystem& builtin = dy();
  REQUIRE(file.rules.size() == builtin.rules.size());
  for (std::size_t i = 0; i < file.rules.size(); ++i) {
    CHECK(file.rules[i].lhs == builtin.rules[i].lhs);
    CHECK(file.rules[i].rhs == builtin.rules[i].rhs);
  }
  for (const auto& [name, sym] : builtin.sig.symbols) {
    const Symbol* other = file.sig.find(name);
    REQUIRE(other != nullptr);
    CHECK(other->arity == sym.arity);
    CHECK(other->is_public == sym.is_public);
  }
}
