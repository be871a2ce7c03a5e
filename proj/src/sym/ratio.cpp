#include "moment/sym/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace moment::sym {

namespace {

bool same_base(const Poly& x, const Poly& y) { return Poly::compare(x, y) == 0; }

void sort_factors(std::vector<Factor>& fs) {
    std::sort(fs.begin(), fs.end(), [](const Factor& x, const Factor& y) { return Poly::compare(x.base, y.base) < 0; });
    std::vector<Factor> out;
    for (auto& f : fs) {
        if (f.exp == 0) continue;
        if (!out.empty() && same_base(out.back().base, f.base))
            out.back().exp += f.exp;
        else
            out.push_back(std::move(f));
    }
    fs = std::move(out);
}

enum class Combine { sum, max };

std::vector<Factor> merge(const std::vector<Factor>& x, const std::vector<Factor>& y, Combine how) {
    std::vector<Factor> out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        int c = i == x.size() ? 1 : j == y.size() ? -1 : Poly::compare(x[i].base, y[j].base);
        if (c < 0) {
            out.push_back(x[i++]);
        } else if (c > 0) {
            out.push_back(y[j++]);
        } else {
            unsigned e = how == Combine::sum ? x[i].exp + y[j].exp : std::max(x[i].exp, y[j].exp);
            out.push_back({x[i].base, e});
            ++i;
            ++j;
        }
    }
    return out;
}

// prod over target of base^(target.exp - have.exp); have must be a sub-list of target.
Poly multiplier(const std::vector<Factor>& target, const std::vector<Factor>& have) {
    Poly m(1);
    std::size_t j = 0;
    for (const auto& f : target) {
        unsigned e = f.exp;
        if (j < have.size() && same_base(have[j].base, f.base)) e -= have[j++].exp;
        if (e) m *= f.base.pow(e);
    }
    return m;
}

Poly expand(const std::vector<Factor>& fs) {
    Poly m(1);
    for (const auto& f : fs) m *= f.base.pow(f.exp);
    return m;
}

void cancel_into(Poly& num, std::vector<Factor>& den) {
    if (num.is_zero()) {
        den.clear();
        return;
    }
    for (auto& f : den) {
        while (f.exp > 0) {
            auto q = num.divide_exact(f.base);
            if (!q) break;
            num = std::move(*q);
            --f.exp;
        }
    }
    std::erase_if(den, [](const Factor& f) { return f.exp == 0; });
}

struct Split {
    mpq_class scalar;
    std::vector<Factor> factors;
};

// d = scalar * prod(factors), factors canonical; known bases are tried first.
Split split_atoms(const Poly& d, const std::vector<const Poly*>& known) {
    if (d.is_zero()) throw AlgebraError("division by the zero rational function");
    Split s;
    s.scalar = d.content();
    if (sgn(d.leading().coef) < 0) s.scalar = -s.scalar;
    Poly r = d.scaled(1 / s.scalar);
    Monomial mc = r.monomial_content();
    if (!mc.is_one()) {
        r = *r.divide_exact(Poly::monomial(mc, 1));
        for (std::size_t i = 0; i < kVarCount; ++i)
            if (unsigned e = mc.degree(var_at(i))) s.factors.push_back({Poly::var(var_at(i)), e});
    }
    for (const Poly* k : known) {
        if (r.is_constant()) break;
        if (k->size() < 2) continue;
        unsigned e = 0;
        while (!r.is_constant()) {
            auto q = r.divide_exact(*k);
            if (!q) break;
            r = std::move(*q);
            ++e;
        }
        if (e) s.factors.push_back({*k, e});
    }
    if (!r.is_constant()) s.factors.push_back({std::move(r), 1});
    sort_factors(s.factors);
    return s;
}

Ratio make_raw(Poly num, std::vector<Factor> den);

}  // namespace

// ---- construction

Ratio Ratio::assemble(Poly num, std::vector<Factor> den) {
    sort_factors(den);
    cancel_into(num, den);
    Ratio r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
}

namespace {
Ratio make_raw(Poly num, std::vector<Factor> den) {
    if (num.is_zero()) den.clear();
    return Ratio::assemble(std::move(num), std::move(den));
}
}  // namespace

Ratio Ratio::quotient(const Poly& num, const Poly& den) {
    Split s = split_atoms(den, {});
    return assemble(num.scaled(1 / s.scalar), std::move(s.factors));
}

Poly Ratio::den() const { return expand(den_); }

std::uint32_t Ratio::support() const {
    std::uint32_t s = num_.support();
    for (const auto& f : den_) s |= f.base.support();
    return s;
}

// ---- arithmetic

Ratio Ratio::operator-() const {
    Ratio r = *this;
    r.num_ = -r.num_;
    return r;
}

namespace {

bool same_factors(const std::vector<Factor>& x, const std::vector<Factor>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].exp != y[i].exp || !same_base(x[i].base, y[i].base)) return false;
    return true;
}

Ratio add_impl(const Ratio& x, const Ratio& y, bool subtract) {
    if (y.is_zero()) return x;
    if (x.is_zero()) return subtract ? -y : y;
    if (same_factors(x.factors(), y.factors())) {
        Poly n = subtract ? x.num() - y.num() : x.num() + y.num();
        return Ratio::assemble(std::move(n), x.factors());
    }
    auto lcm = merge(x.factors(), y.factors(), Combine::max);
    Poly a = x.num() * multiplier(lcm, x.factors());
    Poly b = y.num() * multiplier(lcm, y.factors());
    return Ratio::assemble(subtract ? a - b : a + b, std::move(lcm));
}

Ratio inverse_with(const Ratio& y, const std::vector<const Poly*>& known) {
    if (y.is_zero()) throw AlgebraError("division by the zero rational function");
    Split s = split_atoms(y.num(), known);
    return make_raw(expand(y.factors()).scaled(1 / s.scalar), std::move(s.factors));
}

}  // namespace

Ratio operator+(const Ratio& x, const Ratio& y) { return add_impl(x, y, false); }
Ratio operator-(const Ratio& x, const Ratio& y) { return add_impl(x, y, true); }

Ratio operator*(const Ratio& x, const Ratio& y) {
    if (x.is_zero() || y.is_zero()) return {};
    if (x.is_polynomial() && y.is_polynomial()) return Ratio(x.num() * y.num());
    Poly xn = x.num(), yn = y.num();
    std::vector<Factor> xd = x.factors(), yd = y.factors();
    cancel_into(xn, yd);
    cancel_into(yn, xd);
    Ratio r;
    r.num_ = xn * yn;
    r.den_ = merge(xd, yd, Combine::sum);
    return r;
}

Ratio operator/(const Ratio& x, const Ratio& y) {
    std::vector<const Poly*> known;
    for (const auto& f : x.factors()) known.push_back(&f.base);
    for (const auto& f : y.factors()) known.push_back(&f.base);
    return x * inverse_with(y, known);
}

Ratio Ratio::inverse() const {
    std::vector<const Poly*> known;
    for (const auto& f : den_) known.push_back(&f.base);
    return inverse_with(*this, known);
}

Ratio Ratio::pow(long n) const {
    if (n == 0) return Ratio(1);
    if (n < 0) return inverse().pow(-n);
    Ratio r;
    r.num_ = num_.pow(static_cast<unsigned>(n));
    r.den_ = den_;
    for (auto& f : r.den_) f.exp *= static_cast<unsigned>(n);
    if (r.num_.is_zero()) r.den_.clear();
    return r;
}

bool ratio_eq(const Ratio& x, const Ratio& y) {
    if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
    if (same_factors(x.factors(), y.factors())) return x.num() == y.num();
    auto lcm = merge(x.factors(), y.factors(), Combine::max);
    return x.num() * multiplier(lcm, x.factors()) == y.num() * multiplier(lcm, y.factors());
}

// ---- calculus

Ratio partial_derivative(const Ratio& x, Var v) {
    if (!x.depends_on(v)) return {};
    std::vector<const Factor*> dep;
    for (const auto& f : x.factors())
        if (f.base.depends_on(v)) dep.push_back(&f);
    if (dep.empty()) return Ratio::assemble(x.num().derivative(v), x.factors());

    Poly all(1);
    for (const Factor* f : dep) all *= f->base;
    Poly sum;
    for (std::size_t i = 0; i < dep.size(); ++i) {
        Poly t = dep[i]->base.derivative(v).scaled(dep[i]->exp);
        for (std::size_t j = 0; j < dep.size(); ++j)
            if (j != i) t *= dep[j]->base;
        sum += t;
    }
    Poly num = x.num().derivative(v) * all - x.num() * sum;
    std::vector<Factor> den = x.factors();
    for (auto& f : den)
        if (f.base.depends_on(v)) ++f.exp;
    return Ratio::assemble(std::move(num), std::move(den));
}

// ---- substitution

namespace {

Ratio substitute_poly(const Poly& p, const std::vector<std::pair<Var, const Ratio*>>& binds) {
    std::vector<std::pair<Var, const Ratio*>> used;
    for (const auto& b : binds)
        if (p.depends_on(b.first)) used.push_back(b);
    if (used.empty()) return Ratio(p);

    const std::size_t nb = used.size();
    std::vector<unsigned> deg(nb);
    for (std::size_t j = 0; j < nb; ++j) deg[j] = p.degree(used[j].first);

    std::map<std::vector<unsigned>, std::vector<Term>> groups;
    for (const auto& t : p.terms()) {
        std::vector<unsigned> key(nb);
        Monomial m = t.mono;
        for (std::size_t j = 0; j < nb; ++j) {
            key[j] = m.degree(used[j].first);
            m.set(used[j].first, 0);
        }
        groups[key].push_back({m, t.coef});
    }

    std::vector<std::vector<std::optional<Poly>>> npow(nb), dpow(nb);
    std::vector<Poly> dbase(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        npow[j].resize(deg[j] + 1);
        dpow[j].resize(deg[j] + 1);
        dbase[j] = used[j].second->den();
    }
    auto power = [](std::vector<std::optional<Poly>>& cache, const Poly& base, unsigned e) -> const Poly& {
        if (!cache[e]) cache[e] = base.pow(e);
        return *cache[e];
    };

    Poly total;
    for (auto& [key, terms] : groups) {
        Poly coef = Poly::from_terms(std::move(terms));
        for (std::size_t j = 0; j < nb; ++j) {
            coef *= power(npow[j], used[j].second->num(), key[j]);
            if (!used[j].second->is_polynomial()) coef *= power(dpow[j], dbase[j], deg[j] - key[j]);
        }
        total += coef;
    }
    std::vector<Factor> den;
    for (std::size_t j = 0; j < nb; ++j)
        for (const auto& f : used[j].second->factors()) den.push_back({f.base, f.exp * deg[j]});
    return make_raw(std::move(total), std::move(den));
}

}  // namespace

Ratio substitute(const Ratio& x, const Bindings& bindings) {
    std::vector<std::pair<Var, const Ratio*>> binds;
    std::uint32_t bound = 0;
    for (const auto& [v, r] : bindings) {
        binds.emplace_back(v, &r);
        bound |= 1u << index(v);
    }
    if (!(x.support() & bound)) return x;

    Ratio head = substitute_poly(x.num(), binds);
    std::vector<Factor> untouched;
    std::vector<const Factor*> touched;
    for (const auto& f : x.factors()) {
        if (f.base.support() & bound)
            touched.push_back(&f);
        else
            untouched.push_back(f);
    }
    Ratio r = head * Ratio::assemble(Poly(1), std::move(untouched));
    for (const Factor* f : touched) {
        Ratio s = substitute_poly(f->base, binds);
        if (s.is_zero()) throw AlgebraError("substitution makes a denominator vanish: " + f->base.to_string());
        r = r / s.pow(f->exp);
    }
    return r;
}

Ratio substitute_power(const Ratio& x, Var v, unsigned n, const Ratio& value) {
    if (n == 0) throw AlgebraError("power substitution with exponent 0");
    auto fail = [&] {
        return AlgebraError("expression is not a function of " + std::string(var_name(v)) + "^" + std::to_string(n));
    };
    auto num = x.num().deflate(v, n);
    if (!num) throw fail();
    std::vector<Factor> den;
    for (const auto& f : x.factors()) {
        if (f.base == Poly::var(v)) {
            if (f.exp % n) throw fail();
            den.push_back({f.base, f.exp / n});
            continue;
        }
        auto b = f.base.deflate(v, n);
        if (!b) throw fail();
        den.push_back({std::move(*b), f.exp});
    }
    return substitute(Ratio::assemble(std::move(*num), std::move(den)), {{v, value}});
}

// ---- output

double Ratio::evaluate(const std::vector<double>& values) const {
    double d = 1;
    for (const auto& f : den_) d *= std::pow(f.base.evaluate(values), static_cast<double>(f.exp));
    return num_.evaluate(values) / d;
}

std::string Ratio::to_string() const {
    if (den_.empty()) return num_.to_string();
    std::ostringstream os;
    if (num_.size() == 1)
        os << num_.to_string();
    else
        os << "(" << num_.to_string() << ")";
    os << "/";
    bool single = den_.size() == 1 && den_[0].base.size() == 1;
    if (!single) os << "(";
    for (std::size_t i = 0; i < den_.size(); ++i) {
        if (i) os << "*";
        const Factor& f = den_[i];
        if (f.base.size() == 1)
            os << f.base.to_string();
        else
            os << "(" << f.base.to_string() << ")";
        if (f.exp > 1) os << "^" << f.exp;
    }
    if (!single) os << ")";
    return os.str();
}

}  // namespace moment::sym
