#include "doctest.h"
#include "gen.hpp"

#include "mpt/ring.hpp"

using namespace mpt;

namespace {

LinExpr b(int i, int d, Rational c = 1) { return LinExpr::symbol({d, i}, c); }

} // namespace

TEST_CASE("lin_add cancels and prunes")
{
    CHECK(lin_add(LinExpr(3) + b(3, 2, 2), LinExpr(1) - b(3, 2, 2)) == LinExpr(4));
    CHECK(!(LinExpr(3) + b(3, 2, 2) + (LinExpr(1) - b(3, 2, 2))).has_symbols());
    LinExpr x = LinExpr(Rational(2, 3)) + b(1, 1, 5);
    CHECK(lin_add(LinExpr(), x) == x);
    CHECK(lin_add(LinExpr(Rational(1, 2)) + b(0, 1), LinExpr(Rational(1, 2))) == LinExpr(1) + b(0, 1));
}

TEST_CASE("lin_mul is scalar by linear")
{
    CHECK(lin_mul(LinExpr(2), LinExpr(3) + b(3, 2)) == LinExpr(6) + b(3, 2, 2));
    CHECK(lin_mul(LinExpr(0), LinExpr(7) + b(3, 2)).is_zero());
    CHECK_THROWS_AS(lin_mul(LinExpr(1) + b(3, 2), LinExpr(1) + b(4, 2)), SymbolDegreeOverflow);
}

TEST_CASE("rationals parse and print canonically")
{
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("-7") == -7);
    CHECK(rational_to_string(Rational(8)) == "8/1");
    CHECK(rational_to_string(Rational(-1, 2)) == "-1/2");
    CHECK_THROWS(parse_rational("1.5"));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(BettiSymbol(1, 7));
}

TEST_CASE("printing")
{
    CHECK((LinExpr(1) - b(3, 2, 2)).to_string() == "1 - 2*b_{3,2}");
    CHECK(LinExpr().to_string() == "0");
    CHECK(b(0, 0, -1).to_string() == "-b_{0,0}");
}

TEST_CASE("property: ring axioms with the degree restriction")
{
    for (int trial = 0; trial < 300; ++trial) {
        LinExpr x = gen::linexpr();
        LinExpr y = gen::linexpr();
        LinExpr z = gen::linexpr();
        LinExpr c = gen::rational();
        LinExpr c2 = gen::rational();
        CHECK((x + y) + z == x + (y + z));
        CHECK(x + y == y + x);
        CHECK(c * x == x * c);
        CHECK(c * (x + y) == c * x + c * y);
        CHECK((c * c2) * x == c * (c2 * x));
        CHECK(x - x == LinExpr());
    }
}

TEST_CASE("property: substitution commutes with add and mul")
{
    auto value = [](const BettiSymbol &s) { return ratio(s.i * 7 + 3, s.d + 2); };
    for (int trial = 0; trial < 300; ++trial) {
        LinExpr x = gen::linexpr();
        LinExpr y = gen::linexpr();
        Rational c = gen::rational();
        CHECK((x + y).substitute(value) == x.substitute(value) + y.substitute(value));
        CHECK((LinExpr(c) * x).substitute(value) == c * x.substitute(value));
    }
}
