#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace mcsymp;

namespace {
RatFunc coeff(const std::string& name) { return RatFunc(Poly(form_coeff(name))); }
}  // namespace

TEST_CASE("wedge alternation and antisymmetry") {
    Form w1 = Form::one_form(6, 1), w2 = Form::one_form(6, 2);
    CHECK(wedge(w1, w1).is_zero());
    CHECK(wedge(w2, w1) == -wedge(w1, w2));
    CHECK_THROWS_AS(wedge(Form::one_form(3, 1), Form::one_form(4, 1)), std::invalid_argument);
}

TEST_CASE("cube of a split 2-form carries the multinomial factor") {
    Form f(6);
    f.add_term({1, 2}, coeff("x1"));
    f.add_term({3, 4}, coeff("x2"));
    f.add_term({5, 6}, coeff("x3"));
    Form cube = wedge(wedge(f, f), f);
    REQUIRE(cube.terms.size() == 1);
    Poly expected = Rational(6) * Poly(form_coeff("x1")) * Poly(form_coeff("x2")) * Poly(form_coeff("x3"));
    CHECK(cube.coefficient(volume_tuple(6)).as_poly() == expected);
}

TEST_CASE("top power of the split closed form on g5_7(a,-a,-1)+L1") {
    // permutation (1,4,2,3,5,6) is even, so the hand expansion of the single
    // surviving product gives +6*x1*x2*x3
    Form f(6);
    f.add_term({1, 4}, coeff("x1"));
    f.add_term({2, 3}, coeff("x2"));
    f.add_term({5, 6}, coeff("x3"));
    Form top = top_power(f, 3);
    Poly expected = Rational(6) * Poly(form_coeff("x1")) * Poly(form_coeff("x2")) * Poly(form_coeff("x3"));
    CHECK(top.coefficient(volume_tuple(6)).as_poly() == expected);
}

TEST_CASE("top power identity and degenerate cases") {
    Form f = Form::basis(2, {1, 2});
    CHECK(top_power(f, 1) == f);

    // rank <= 2: both terms share index 1, so the square vanishes
    Form g(4);
    g.add_term({1, 2}, coeff("x1"));
    g.add_term({1, 3}, coeff("x2"));
    CHECK(top_power(g, 2).is_zero());

    Form mixed(4);
    mixed.add_term({1}, RatFunc(Rational(1)));
    CHECK_THROWS_AS(top_power(mixed + g, 2), std::invalid_argument);
}

TEST_CASE("rank of evaluated 2-forms") {
    Form f(6);
    f.add_term({1, 2}, RatFunc(Rational(1)));
    CHECK(two_form_rank(f) == 2);

    Form g(6);
    g.add_term({1, 2}, RatFunc(Rational(1)));
    g.add_term({3, 4}, RatFunc(Rational(1)));
    g.add_term({5, 6}, RatFunc(Rational(1)));
    CHECK(two_form_rank(g) == 6);

    // d(w2) on the affine line algebra has maximal rank in dimension 2
    Catalog cat = testsup::load_catalog(MCSYMP_DATA_DIR);
    const AlgebraDef& r2 = cat.get("r2");
    Form dw2 = r2.mc.d_of(2);
    CHECK(two_form_rank(dw2) == 2);

    Form partial(6);
    partial.add_term({1, 2}, RatFunc(Poly(parameter("alpha"))));
    CHECK_THROWS_AS(two_form_rank(partial), std::invalid_argument);
}

TEST_CASE("form text round trip") {
    BasisNaming naming{6, 4};
    ExprParser p(naming);
    p.resolve = [](const std::string& id) { return Poly(form_coeff(id)); };
    Form f = p.parse_form("a5*(w1^e4) - a6*(e2^e3)");
    CHECK(f.coefficient({4, 5}).as_poly() == -Poly(form_coeff("a5")));  // w1^e4 = -(e4^w1)
    CHECK(f.coefficient({2, 3}).as_poly() == -Poly(form_coeff("a6")));
    Form again = p.parse_form(to_string(f, naming));
    CHECK(again == f);
}

TEST_CASE("out-of-range basis index is rejected") {
    BasisNaming naming{6, 4};
    ExprParser p(naming);
    CHECK_THROWS_AS(p.parse_form("w3^w1"), ParseError);  // w3 exceeds the two omega slots
    Form ok = p.parse_form("e3^w2");
    CHECK(ok.coefficient({3, 6}).as_poly() == Poly(Rational(1)));
}
