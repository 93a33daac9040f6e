#include "doctest.h"
#include "gen.hpp"
#include "helpers.hpp"

#include "mpt/kernels.hpp"
#include "mpt/qfunc.hpp"

using namespace mpt;
using th::mono;
using th::one;

namespace {

const Exponent P = exponent({{Var::p, 1}});

Series q(Frac e = 1) { return mono({{Var::q, e}}); }
Series p(Frac e = 1) { return mono({{Var::p, e}}); }
Series u(Frac e = 1) { return mono({{Var::u, e}}); }
Series t(Frac e = 1) { return mono({{Var::t, e}}); }

// Random series whose lowest q-slice is a nonzero rational monomial.
Series unit_leading(int64_t q_cut)
{
    Exponent lead = gen::exponent(0, 0, 2, true);
    Series f = Series::monomial(lead, gen::nonzero_rational());
    f = f + gen::series(gen::uniform(0, 5), 1, 4, q_cut, 2, true);
    return f.truncated(q_cut);
}

} // namespace

TEST_CASE("add")
{
    CHECK((one() + q()) + (one() - q()) == Series::constant(2));
    CHECK(q(Frac(1, 2)) + q(Frac(1, 2)) == mono({{Var::q, Frac(1, 2)}}, 2));
    Series f = one() + p() * u(-1);
    CHECK(f + Series() == f);
}

TEST_CASE("add takes the smaller cutoff and intersects windows")
{
    Series f = (one() + q()).truncated(th::qcut(3));
    Series g = Series::zero(th::qcut(2), PWindow::Window(-4, 6));
    Series h = f + g;
    CHECK(h.q_cut() == th::qcut(2));
    CHECK(h.p_window() == PWindow::Window(-4, 6));
}

TEST_CASE("mul")
{
    Series geo = product_expand({{exponent({{Var::q, 1}}), -1}}, th::through(5));
    CHECK((one() - q()) * geo == Series::constant(1).truncated(th::through(5)));
    Series a = p(-1) + p();
    CHECK(a * a == p(-2) + Series::constant(2) + p(2));
}

TEST_CASE("mul window rules")
{
    Series asc = Series::from_terms({{P, 1}}, kInf, PWindow::Ascending(10));
    Series band = Series::from_terms({{P, 1}}, kInf, PWindow::Window(-10, 10));
    CHECK_THROWS_AS(band * band, WindowUnderflow);
    // exact factor with p-support [-1, 1] costs one unit at the top
    Series sym = p(-1) + p();
    CHECK((sym * asc).p_window() == PWindow::Ascending(8));
    CHECK((sym * band).p_window() == PWindow::Window(-8, 8));
    // two ascending windows: hi = min(hi_f + floor_g, hi_g + floor_f)
    CHECK((asc * asc).p_window() == PWindow::Ascending(12));
}

TEST_CASE("invert")
{
    Series inv = invert(one() - q(), th::through(3));
    CHECK(inv == (one() + q() + q(2) + q(3)).truncated(th::through(3)));
    CHECK(invert(q(Frac(1, 2))) == q(Frac(-1, 2)));
    CHECK_THROWS_AS(invert(u() - u(-1)), NonUnitLeadingTerm);
    CHECK_THROWS_AS(invert(Series()), NonUnitLeadingTerm);
}

TEST_CASE("divide_exact")
{
    CHECK(divide_exact(u(2) - u(-2), u() - u(-1)) == u() + u(-1));
    CHECK_THROWS_AS(divide_exact(one() + q(), u() - u(-1)), InexactDivision);
    // theta(u^2, q^2) / theta(u^2, q) has polynomial slices through q^8
    const int64_t cut = th::through(8);
    Exponent u2 = exponent({{Var::u, 2}});
    Series ratio = divide_exact(theta(u2, 2, cut), theta(u2, 1, cut));
    CHECK(ratio.q_cut() == cut);
    CHECK(ratio.coeff(Exponent{}) == LinExpr(1));
    CHECK_SERIES_EQ(mul(ratio, theta(u2, 1, cut)), theta(u2, 2, cut));
}

TEST_CASE("poly_divide_exact terminates on inexact input")
{
    // (u + p) / (u - p) leaves a remainder
    Poly num{{Rest{0, 2, 0, 0}, 1}, {Rest{2, 0, 0, 0}, 1}};
    Poly den{{Rest{0, 2, 0, 0}, 1}, {Rest{2, 0, 0, 0}, -1}};
    CHECK(!poly_divide_exact(num, den).has_value());
}

TEST_CASE("adams")
{
    CHECK(adams(q() + t(), 2) == q(2) + t(2));
    Series f = gen::series(6, 0, 3, th::qcut(4), 2, true);
    CHECK(adams(f, 1) == f);
    CHECK(adams(q(Frac(1, 2)), 3) == q(Frac(3, 2)));
    CHECK(adams(f, 3).q_cut() == th::qcut(12));
}

TEST_CASE("specialize")
{
    Exponent U = exponent({{Var::u, 1}});
    CHECK(specialize(mono({{Var::t, Frac(1, 2)}, {Var::s, Frac(1, 2)}}), {{Var::t, U}, {Var::s, U}}) ==
          u());
    CHECK(euler_realization(quantum_integer(3)) == Series::constant(3));
    Series asc = Series::from_terms({{P, 1}}, kInf, PWindow::Ascending(10));
    CHECK_THROWS_AS(specialize(asc, {{Var::p, U}}), TruncationLoss);
    CHECK_THROWS_AS(specialize(q(), {{Var::u, exponent({{Var::q, 1}})}}), TruncationLoss);
    CHECK_NOTHROW(specialize(asc, {{Var::t, U}}));
}

TEST_CASE("coefficient")
{
    Series f = (one() + mono({{Var::q, 1}}, 2) + mono({{Var::q, 2}}, 3)).truncated(th::through(2));
    CHECK(coefficient(f, {{Var::q, 1}}) == Series::constant(2));
    CHECK_THROWS_AS(coefficient(f, {{Var::q, 3}}), OutsideValidWindow);
    Series asc = Series::from_terms({{P, 1}}, kInf, PWindow::Ascending(4));
    CHECK_THROWS_AS(coefficient(asc, {{Var::p, 3}}), OutsideValidWindow);
    CHECK(coefficient(asc, {{Var::p, 1}}) == Series::constant(1));
}

TEST_CASE("exp and log")
{
    Series e = exp_series(q().truncated(th::through(3)));
    CHECK(e == Series::from_terms({{Exponent{}, 1},
                                   {exponent({{Var::q, 1}}), 1},
                                   {exponent({{Var::q, 2}}), Rational(1, 2)},
                                   {exponent({{Var::q, 3}}), Rational(1, 6)}},
                                  th::through(3)));
    CHECK_THROWS_AS(exp_series(one() + q()), BadConstantTerm);
    CHECK_THROWS_AS(log_series(Series::constant(2) + q()), BadConstantTerm);
    for (int trial = 0; trial < 50; ++trial) {
        Series f = gen::series(5, 1, 4, th::through(6), 2, true);
        CHECK(log_series(exp_series(f)) == f);
    }
}

TEST_CASE("exp/log on ascending p-windows")
{
    // log(1/(1 - p q)) = sum p^k q^k / k
    const int64_t cut = th::through(5);
    Series f = product_expand({{exponent({{Var::q, 1}, {Var::p, 1}}), -1}}, cut)
                   .restricted(PWindow::Ascending(scaled(Var::p, 3)));
    Series l = log_series(f);
    CHECK(l.coeff(exponent({{Var::q, 2}, {Var::p, 2}})) == LinExpr(Rational(1, 2)));
    CHECK(l.coeff(exponent({{Var::q, 4}, {Var::p, 4}})).is_zero()); // outside the window
    Series neg = Series::from_terms({{exponent({{Var::q, 1}, {Var::p, -1}}), 1}}, cut,
                                    PWindow::Ascending(4));
    // each of up to five factors may lower p by one
    Series e = exp_series(neg);
    CHECK(e.p_window() == PWindow::Ascending(scaled(Var::p, -2)));
    CHECK(e.coeff(exponent({{Var::q, 3}, {Var::p, -3}})) == LinExpr(Rational(1, 6)));
    CHECK_SERIES_EQ(e, exp_series(Series::from_terms(neg.terms(), cut)));
    Series band = neg.restricted(PWindow::Window(-4, 4));
    CHECK_THROWS_AS(exp_series(band), WindowUnderflow);
}

TEST_CASE("product_expand")
{
    std::vector<Factor> fs;
    for (int m = 1; m <= 5; ++m) {
        fs.push_back({exponent({{Var::q, m}}), -1});
    }
    Series part = product_expand(fs, th::through(5));
    const int expected[] = {1, 1, 2, 3, 5, 7};
    for (int k = 0; k <= 5; ++k) {
        CHECK(part.coeff(exponent({{Var::q, k}})) == LinExpr(expected[k]));
    }
    Series g = product_expand({{exponent({{Var::u, 1}, {Var::p, 1}, {Var::q, 1}}), -1}},
                              th::through(2));
    CHECK(g == (one() + mono({{Var::u, 1}, {Var::p, 1}, {Var::q, 1}}) +
                mono({{Var::u, 2}, {Var::p, 2}, {Var::q, 2}}))
                   .truncated(th::through(2)));
    std::vector<Factor> eight;
    for (int m = 1; m <= 2; ++m) {
        eight.push_back({exponent({{Var::q, m}}), -8});
    }
    CHECK(product_expand(eight, th::through(2)).coeff(exponent({{Var::q, 2}})) == LinExpr(44));
    CHECK_THROWS_AS(product_expand({{exponent({{Var::p, 1}}), -1}}, th::through(2)),
                    NonConvergentFactor);
}

TEST_CASE("product_expand matches repeated mul")
{
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Factor> fs;
        Series ref = Series::constant(1, th::through(5));
        for (int k = 0; k < 3; ++k) {
            Exponent m = gen::exponent(1, 3, 1, true);
            int e = gen::uniform(-2, 2);
            Rational c = gen::nonzero_rational(2);
            fs.push_back({m, e, c});
            Series lin = one() - Series::monomial(m, c);
            for (int r = 0; r < std::abs(e); ++r) {
                ref = e > 0 ? ref * lin : divide_exact(ref, lin, th::through(5));
            }
        }
        CHECK_SERIES_EQ(product_expand(fs, th::through(5)), ref);
    }
}

TEST_CASE("product_expand_p")
{
    Series f = product_expand_p({{exponent({{Var::p, 1}, {Var::u, 1}}), -1}}, scaled(Var::p, 3));
    CHECK(f.p_window() == PWindow::Ascending(scaled(Var::p, 3)));
    CHECK(f.size() == 4);
    CHECK_THROWS_AS(product_expand_p({{exponent({{Var::p, -1}}), -1}}, 4), NonConvergentFactor);
}

TEST_CASE("property: mul is commutative and associative")
{
    for (int trial = 0; trial < 100; ++trial) {
        Series f = gen::series(5, -1, 3, th::through(4), 2, true);
        Series g = gen::series(5, 0, 3, th::through(3), 2, true);
        Series h = gen::series(4, 0, 2, kInf, 2, true);
        CHECK_SERIES_EQ(f * g, g * f);
        CHECK_SERIES_EQ((f * g) * h, f * (g * h));
    }
}

TEST_CASE("property: invert then mul gives 1")
{
    for (int trial = 0; trial < 1000; ++trial) {
        Series f = unit_leading(th::through(4));
        Series prod = f * invert(f);
        CHECK_SERIES_EQ(prod, Series::constant(1));
        CHECK(prod.q_cut() >= th::through(4) - 0);
    }
}

TEST_CASE("property: adams composes")
{
    for (int trial = 0; trial < 100; ++trial) {
        Series f = gen::series(5, -1, 3, th::through(4), 2, true);
        int a = gen::uniform(1, 4);
        int b = gen::uniform(1, 4);
        CHECK(adams(adams(f, a), b) == adams(f, a * b));
    }
}

TEST_CASE("property: specialize commutes with add and mul")
{
    const Exponent U = exponent({{Var::u, 1}});
    Substitution sub{{Var::t, U}, {Var::s, Exponent{}}};
    for (int trial = 0; trial < 100; ++trial) {
        Series f = gen::series(5, 0, 3, th::through(4), 2, true);
        Series g = gen::series(5, 0, 3, th::through(4), 2, true);
        CHECK_SERIES_EQ(specialize(f + g, sub), specialize(f, sub) + specialize(g, sub));
        CHECK_SERIES_EQ(specialize(f * g, sub), specialize(f, sub) * specialize(g, sub));
    }
}

TEST_CASE("property: exp turns sums into products")
{
    for (int trial = 0; trial < 60; ++trial) {
        Series f = gen::series(4, 1, 4, th::through(5), 2, true);
        Series g = gen::series(4, 1, 4, th::through(5), 2, true);
        CHECK_SERIES_EQ(exp_series(f + g), exp_series(f) * exp_series(g));
    }
}

TEST_CASE("property: serial and sliced kernels agree")
{
    for (int trial = 0; trial < 100; ++trial) {
        Series f = gen::series(12, -1, 5, kInf, 2, true);
        Series g = gen::series(12, 0, 5, kInf, 2, true);
        const int64_t cut = th::through(gen::uniform(0, 8));
        CHECK(kernel::mul_reference(f.slices(), g.slices(), cut) ==
              kernel::mul_sliced(f.slices(), g.slices(), cut));
    }
}

TEST_CASE("symbol-carrying coefficients flow through mul")
{
    LinExpr b = LinExpr::symbol({2, 3});
    Series f = Series::monomial(exponent({{Var::q, 1}}), b);
    Series g = one() + u();
    CHECK((f * g).coeff(exponent({{Var::q, 1}, {Var::u, 1}})) == b);
    CHECK_THROWS_AS(f * f, SymbolDegreeOverflow);
}
