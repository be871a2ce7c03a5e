#include "moment/sym/properties.hpp"

#include <array>

#include "moment/sym/linear.hpp"

namespace moment::sym {

namespace {

constexpr std::array<Var, 5> kPool = {Var::k, Var::K, Var::a, Var::w, Var::p};

void record(PropertyTally& t, bool ok, const std::string& what) {
    ++t.cases;
    if (!ok) {
        if (!t.failures) t.first_failure = what;
        ++t.failures;
    }
}

}  // namespace

Poly random_poly(std::mt19937_64& rng, int max_terms, int max_degree) {
    std::uniform_int_distribution<int> nterms(1, max_terms), deg(0, max_degree), coef(-5, 5);
    std::vector<Term> terms;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        Monomial m;
        for (Var v : kPool) m.set(v, static_cast<unsigned>(std::max(0, deg(rng) - 1)));
        int c = 0;
        while (c == 0) c = coef(rng);
        terms.push_back({m, mpq_class(c)});
    }
    Poly p = Poly::from_terms(std::move(terms));
    return p.is_zero() ? Poly(1) : p;
}

Ratio random_ratio(std::mt19937_64& rng) {
    return Ratio::quotient(random_poly(rng), random_poly(rng));
}

PropertyTally check_field_axioms(int cases, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PropertyTally t;
    for (int i = 0; i < cases; ++i) {
        Ratio x = random_ratio(rng), y = random_ratio(rng), z = random_ratio(rng);
        Poly c = random_poly(rng, 3, 2);
        bool ok = ratio_eq(x + y, y + x) && ratio_eq(x * y, y * x) && ratio_eq((x + y) + z, x + (y + z)) &&
                  ratio_eq((x * y) * z, x * (y * z)) && ratio_eq(x * (y + z), x * y + x * z) &&
                  ratio_eq((x * y) / y, x) && (x - x).is_zero() &&
                  ratio_eq(Ratio::quotient(x.num(), x.den()),
                           Ratio::quotient(x.num() * c, x.den() * c));
        record(t, ok, "x=" + x.to_string() + " y=" + y.to_string() + " z=" + z.to_string());
    }
    return t;
}

PropertyTally check_derivative_rules(int cases, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PropertyTally t;
    std::uniform_int_distribution<std::size_t> pick(0, kPool.size() - 1);
    for (int i = 0; i < cases; ++i) {
        Ratio x = random_ratio(rng), y = random_ratio(rng);
        Var v = kPool[pick(rng)];
        Ratio dx = partial_derivative(x, v), dy = partial_derivative(y, v);
        bool ok = ratio_eq(partial_derivative(x * y, v), dx * y + x * dy) &&
                  ratio_eq(partial_derivative(x / y, v), (dx * y - x * dy) / (y * y));
        record(t, ok, "x=" + x.to_string() + " y=" + y.to_string() + " v=" + std::string(var_name(v)));
    }
    return t;
}

PropertyTally check_collect_reconstruct(int cases, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PropertyTally t;
    std::uniform_int_distribution<std::size_t> pick(0, kPool.size() - 1);
    for (int i = 0; i < cases; ++i) {
        Poly p = random_poly(rng, 8, 5);
        Var v = kPool[pick(rng)];
        auto cs = p.coefficients(v);
        Poly back;
        for (std::size_t e = 0; e < cs.size(); ++e) back += cs[e] * Poly::var(v, static_cast<unsigned>(e));
        bool ok = back == p && (cs.empty() || !cs.back().is_zero());
        for (const auto& c : cs) ok = ok && !c.depends_on(v);
        record(t, ok, "p=" + p.to_string());
    }
    return t;
}

PropertyTally check_solve2x2(int cases, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PropertyTally t;
    while (t.cases < cases) {
        Ratio p1 = random_ratio(rng), q1 = random_ratio(rng), r1 = random_ratio(rng);
        Ratio p2 = random_ratio(rng), q2 = random_ratio(rng), r2 = random_ratio(rng);
        if ((p1 * q2 - p2 * q1).is_zero()) continue;
        auto s = solve_linear_2x2(p1, q1, r1, p2, q2, r2);
        bool ok = (p1 * s.x + q1 * s.y + r1).is_zero() && (p2 * s.x + q2 * s.y + r2).is_zero();
        record(t, ok, "p1=" + p1.to_string());
    }
    return t;
}

}  // namespace moment::sym
