#include <catch_amalgamated.hpp>

#include "moment/sym/expr.hpp"
#include "moment/sym/linear.hpp"

using namespace moment::sym;

namespace {
Ratio R(const std::string& s) { return parse_ratio(s); }
}  // namespace

TEST_CASE("variable names round-trip") {
    for (std::size_t i = 0; i < kVarCount; ++i) {
        Var v = var_at(i);
        REQUIRE(var_from_name(var_name(v)) == v);
    }
    REQUIRE_FALSE(var_from_name("kappa").has_value());
}

TEST_CASE("monomial packing and order") {
    Monomial a = Monomial::of(Var::k, 2) * Monomial::of(Var::K);
    REQUIRE(a.degree(Var::k) == 2);
    REQUIRE(a.degree(Var::K) == 1);
    REQUIRE(a.degree(Var::nphi) == 0);
    REQUIRE(Monomial::of(Var::k) > Monomial::of(Var::nphi, 5));
    REQUIRE(Monomial::of(Var::k22, 3).degree(Var::k22) == 3);
    REQUIRE(a.divisible_by(Monomial::of(Var::k)));
    REQUIRE_FALSE(a.divisible_by(Monomial::of(Var::k, 3)));
    REQUIRE_THROWS_AS(Monomial::of(Var::w, 100) * Monomial::of(Var::w, 100), SizeLimitError);
}

TEST_CASE("parse: simple polynomial") {
    auto e = parse_expr("k^2 - K");
    REQUIRE(e->kind == Expr::Kind::sub);
    Poly expect = Poly::var(Var::k, 2) - Poly::var(Var::K);
    REQUIRE(lower(*e).num() == expect);
    REQUIRE(lower(*e).is_polynomial());
}

TEST_CASE("parse: P1 lowers to the rational function") {
    Ratio p1 = R("(K*(a*k^2+(a+8)*K))/((a+2)*k^4+2*k^2*K)");
    Ratio same = R("K*(a + (a+8)*K/k^2)/((a+2)*k^2 + 2*K)");
    REQUIRE(ratio_eq(p1, same));
    std::vector<double> at(kVarCount, 0.0);
    at[index(Var::k)] = 1.3;
    at[index(Var::K)] = -0.7;
    at[index(Var::a)] = 2.5;
    double k = 1.3, K = -0.7, a = 2.5;
    double direct = K * (a * k * k + (a + 8) * K) / ((a + 2) * k * k * k * k + 2 * k * k * K);
    REQUIRE(p1.evaluate(at) == Catch::Approx(direct).epsilon(1e-12));
}

TEST_CASE("parse errors carry offsets") {
    try {
        parse_expr("k^^2");
        FAIL("no error");
    } catch (const ParseError& e) {
        REQUIRE(e.offset == 2);
    }
    REQUIRE_THROWS_AS(parse_expr("kappa + 1"), ParseError);
    REQUIRE_THROWS_AS(parse_expr(""), ParseError);
    REQUIRE_THROWS_AS(parse_expr("(k+1"), ParseError);
    REQUIRE_THROWS_AS(parse_expr("k 2"), ParseError);
}

TEST_CASE("unary minus binds to the base") {
    REQUIRE(ratio_eq(R("-k^2"), R("k^2")));
    REQUIRE(ratio_eq(R("-(k^2)"), R("0 - k^2")));
    REQUIRE(ratio_eq(R("2^-2*k"), R("k/4")));
    REQUIRE(ratio_eq(R("k^-2"), R("1/(k*k)")));
}

TEST_CASE("printing keeps structure") {
    for (std::string s : {"k^2 - K", "-k^2", "-(k^2)", "(a + 2)*k^3/(2*K + k)", "k - (K - a)",
                          "k/(K*a)", "(k/K)/a", "--k", "k11 + k12*k22^-3", "(-k)^3 - -2"}) {
        auto e = parse_expr(s);
        auto again = parse_expr(print_expr(*e));
        INFO(s << " -> " << print_expr(*e));
        REQUIRE(ast_equal(*e, *again));
    }
    REQUIRE(print_expr(*parse_expr("k - (K - a)")) == "k - (K - a)");
    REQUIRE(print_expr(*parse_expr("(k*K)")) == "k*K");
}

TEST_CASE("ratio printing re-parses to an equal value") {
    for (std::string s : {"-k^2*K/(k^2-K)", "(3/2)*k^2 - K/(a*w)", "-(k^2)/(k+1)^2", "1/k"}) {
        Ratio r = R(s);
        REQUIRE(ratio_eq(R(r.to_string()), r));
    }
}

TEST_CASE("ratio arithmetic examples") {
    Ratio two_over_k = R("1/k") + R("1/k");
    REQUIRE(ratio_eq(two_over_k, R("2/k")));
    REQUIRE(ratio_eq(two_over_k, R("2*k/k^2")));

    Ratio gamma = R("w*(K - k^2)*p/(2*k*K + (a+2)*k^3)");
    REQUIRE(ratio_eq(gamma * R("2*k*K + (a+2)*k^3"), R("w*(K - k^2)*p")));
    REQUIRE((gamma * R("2*k*K + (a+2)*k^3")).is_polynomial());

    REQUIRE_THROWS_AS(R("k") / Ratio(0), AlgebraError);
    REQUIRE_THROWS_AS(R("k/(K-K)"), AlgebraError);
}

TEST_CASE("ratio_eq examples") {
    REQUIRE(ratio_eq(R("(k^2-K)/k"), R("k - K/k")));
    REQUIRE_FALSE(ratio_eq(R("1/k"), R("1/(k+1)")));
    REQUIRE(ratio_eq(R("0"), R("k - k")));
    REQUIRE_FALSE(ratio_eq(R("0"), R("1/k")));
}

TEST_CASE("substitution examples") {
    REQUIRE(ratio_eq(substitute(R("k*k2"), {{Var::k2, R("K/k")}}), R("K")));
    REQUIRE(ratio_eq(substitute(R("k"), {}), R("k")));
    REQUIRE_THROWS_AS(substitute(R("1/(k-K)"), {{Var::k, R("K")}}), AlgebraError);
    // simultaneous, not sequential
    REQUIRE(ratio_eq(substitute(R("k + 2*K"), {{Var::k, R("K")}, {Var::K, R("k")}}), R("K + 2*k")));
    REQUIRE(ratio_eq(substitute(R("(k^2+w)/(p*w)"), {{Var::w, R("1/(k+1)")}, {Var::p, R("k/K")}}),
                     R("(k^2 + 1/(k+1))*(k+1)*K/k")));
}

TEST_CASE("power substitution") {
    Ratio x = R("k*p^4 + q^2/(p^2 + K)");
    Ratio y = substitute_power(x, Var::p, 2, R("w/k"));
    REQUIRE(ratio_eq(y, R("k*(w/k)^2 + q^2/(w/k + K)")));
    REQUIRE_THROWS_AS(substitute_power(R("p^3"), Var::p, 2, R("w")), AlgebraError);
}

TEST_CASE("partial derivative examples") {
    REQUIRE(ratio_eq(partial_derivative(R("k^2*K"), Var::k), R("2*k*K")));
    REQUIRE(ratio_eq(partial_derivative(R("1/k"), Var::k), R("-1/k^2")));
    REQUIRE(partial_derivative(R("K/(a+1)"), Var::k).is_zero());

    // M3 = M4/(4(a+3)(a+4)k^4K^3); power rule applied by hand term by term.
    Ratio m3 = R("(-(a^2+4*a+3)*k^8 - 2*(a^2+3*a+2)*k^6*K - 2*(a^2+8*a+7)*k^4*K^2 + 2*(a-2)*k^2*K^3 + 3*K^4)"
                 "/(4*(a+3)*(a+4)*k^4*K^3)");
    Ratio by_hand = R("(-4*(a^2+4*a+3)*k^3 - 4*(a^2+3*a+2)*k*K + 0*K^2 - 4*(a-2)*K^3/k^3 - 12*K^4/k^5)"
                      "/(4*(a+3)*(a+4)*K^3)");
    REQUIRE(ratio_eq(partial_derivative(m3, Var::k), by_hand));
}

TEST_CASE("collect coefficients examples") {
    auto cs = R("k^2 + 2*K*k + K^2").num().coefficients(Var::k);
    REQUIRE(cs.size() == 3);
    REQUIRE(cs[0] == Poly::var(Var::K, 2));
    REQUIRE(cs[1] == Poly::var(Var::K).scaled(2));
    REQUIRE(cs[2] == Poly(1));
    REQUIRE(Poly().coefficients(Var::k).empty());

    Ratio deg10 = R("-(a+5)*k^10 + (2*a*(a+9)+37)*K*k^8 + 2*(a*(a*(a+13)+47)+47)*K^2*k^6"
                    " + 2*(a*(a*(a+6)+14)+29)*K^3*k^4 - (a+1)*(a*(a+4)-7)*K^4*k^2 + (a+1)^2*K^5");
    auto c10 = collect_coefficients(deg10, Var::k);
    REQUIRE(c10.size() == 11);
    REQUIRE(ratio_eq(c10[10], R("-(a+5)")));

    Ratio deg2 = R("(a+2)*c^2*(a*(c-4)-12) + (2*c*(-a*(a+12)-2*a*(a+3)*c-24))*k + (a*(3*a+10)*c-4*(a+6))*k^2");
    auto c2 = collect_coefficients(deg2, Var::k);
    REQUIRE(c2.size() == 3);
    REQUIRE(ratio_eq(c2[2], R("a*(3*a+10)*c - 4*(a+6)")));

    REQUIRE_THROWS_AS(collect_coefficients(R("1/k"), Var::k), AlgebraError);
}

TEST_CASE("2x2 solve examples") {
    auto s = solve_linear_2x2(1, 1, -2, 1, -1, 0);
    REQUIRE(ratio_eq(s.x, 1));
    REQUIRE(ratio_eq(s.y, 1));
    REQUIRE_THROWS_AS(solve_linear_2x2(1, 1, -1, 2, 2, -2), AlgebraError);

    auto t = solve_linear_2x2(R("k"), R("K"), R("-1"), R("1/k"), R("a"), R("w"));
    REQUIRE((R("k") * t.x + R("K") * t.y + R("-1")).is_zero());
    REQUIRE((R("1/k") * t.x + R("a") * t.y + R("w")).is_zero());
}

TEST_CASE("affine solve") {
    REQUIRE(ratio_eq(solve_affine(R("k*g + w*p"), Var::g), R("-w*p/k")));
    REQUIRE_THROWS_AS(solve_affine(R("g^2 + 1"), Var::g), AlgebraError);
    REQUIRE_THROWS_AS(solve_affine(R("k"), Var::g), AlgebraError);
}

TEST_CASE("term guard") {
    std::size_t old = max_terms();
    set_max_terms(50);
    REQUIRE_THROWS_AS(R("(k+K+a+w+c+1)^4"), SizeLimitError);
    set_max_terms(old);
    REQUIRE_NOTHROW(R("(k+K+a+w+c+1)^4"));
}

TEST_CASE("references resolve against an environment") {
    Environment env{{"P1", R("k/K")}, {"gm.g", R("w")}};
    REQUIRE(ratio_eq(parse_ratio("P1*K + gm.g", env), R("k + w")));
    REQUIRE_THROWS(parse_ratio("P2", env));
    ParseOptions o;
    o.allow_references = true;
    REQUIRE(references(*parse_expr("P1 + k*Q_1 - P1", o)) == std::set<std::string>{"P1", "Q_1"});
}
