#include <doctest.h>

#include "corpus.hpp"
#include "padic/errors.hpp"
#include "padic/parser.hpp"

using padic::FunctionSpec;
using padic::parse;

TEST_CASE("constructor and polynomial syntax") {
  CHECK(parse("closed_ergodic(x^2)") == FunctionSpec::closed_ergodic(FunctionSpec::poly({0, 0, 1})));
  CHECK(parse("x^3 + 5*x + 1") == FunctionSpec::poly({1, 5, 0, 1}));
  CHECK(parse("perturb(ell=2, r=2, u=x+1)") ==
        FunctionSpec::perturbed(2, 2, FunctionSpec::poly({1, 1})));
  CHECK(parse("bseries(0,1,2)") == FunctionSpec::bseries({0, 1, 2}));
  CHECK(parse("mahler2(1, -1)") == FunctionSpec::mahler2({1, -1}));
  CHECK(parse("iterate(x+1, 3)") == FunctionSpec::iterate(FunctionSpec::poly({1, 1}), 3));
  CHECK(parse("compose(x^2, x+1)") ==
        FunctionSpec::compose(FunctionSpec::poly({0, 0, 1}), FunctionSpec::poly({1, 1})));
  CHECK(parse("awrap(1, x^2 - x)") == FunctionSpec::awrap(1, FunctionSpec::poly({0, -1, 1})));
}

TEST_CASE("polynomial expansion") {
  CHECK(parse("(x+1)^2") == FunctionSpec::poly({1, 2, 1}));
  CHECK(parse("(x - 1)*(x + 1)") == FunctionSpec::poly({-1, 0, 1}));
  CHECK(parse("x1") == parse("x"));
  CHECK(parse("-3 + 0*x") == FunctionSpec::poly({-3}));
  CHECK(parse(" 2 * x ^ 2 ") == FunctionSpec::poly({0, 0, 2}));
}

TEST_CASE("arity and coarity") {
  CHECK(parse("x1 + x2").arity() == 2);
  CHECK(parse("[x1 + x2]").coarity() == 1);
  CHECK(parse("[x1, x2, x1]").coarity() == 3);
  CHECK(parse("x3").arity() == 3);
  CHECK(parse("xor(x, 3)").requires_p2());
  CHECK(parse("mahler2(1)").requires_p2());
  CHECK_FALSE(parse("x^2 + 1").requires_p2());
}

TEST_CASE("syntax errors carry positions") {
  auto position_of = [](const char* text) -> long {
    try {
      parse(text);
    } catch (const padic::ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(position_of("x +") == 3);
  CHECK(position_of("x ^ x") == 4);
  CHECK(position_of("foo(x)") == 0);
  CHECK(position_of("(x + 1") == 6);
  CHECK(position_of("x $ 1") == 2);
  CHECK(position_of("perturb(ell=2, r=2)") >= 0);
  CHECK(position_of("bseries()") >= 0);
  CHECK(position_of("x0") >= 0);
  CHECK(position_of("x 1") >= 0);
}

TEST_CASE("univariate-only constructors reject multivariate bodies") {
  CHECK_THROWS_AS(parse("closed_ergodic(x1 + x2)"), padic::ArityError);
  CHECK_THROWS_AS(parse("iterate(x1*x2, 2)"), padic::ArityError);
}

TEST_CASE("printing round-trips through the parser") {
  for (const std::string& text : dsl_corpus()) {
    CAPTURE(text);
    const FunctionSpec f = parse(text);
    const std::string printed = f.to_string();
    CAPTURE(printed);
    CHECK(parse(printed) == f);
    CHECK(parse(printed).to_string() == printed);
  }
}
