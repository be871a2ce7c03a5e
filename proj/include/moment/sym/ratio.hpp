#pragma once

#include <map>
#include <string>
#include <vector>

#include "moment/sym/poly.hpp"

namespace moment::sym {

struct Factor {
    Poly base;  // primitive, integer coefficients, positive leading coefficient
    unsigned exp;
};

// num / prod(base^exp). The denominator is kept as a list of factors so that
// sums only multiply through by the factors they actually lack. Not a normal
// form: equality goes through ratio_eq.
class Ratio {
public:
    Ratio() = default;
    Ratio(long n) : num_(n) {}  // NOLINT
    Ratio(Poly p) : num_(std::move(p)) {}  // NOLINT
    explicit Ratio(const mpq_class& c) : num_(c) {}
    static Ratio var(Var v) { return Ratio(Poly::var(v)); }
    // Throws AlgebraError when den is zero.
    static Ratio quotient(const Poly& num, const Poly& den);

    const Poly& num() const { return num_; }
    const std::vector<Factor>& factors() const { return den_; }
    Poly den() const;

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }
    std::uint32_t support() const;
    bool depends_on(Var v) const { return (support() >> index(v)) & 1u; }

    Ratio operator-() const;
    friend Ratio operator+(const Ratio& x, const Ratio& y);
    friend Ratio operator-(const Ratio& x, const Ratio& y);
    friend Ratio operator*(const Ratio& x, const Ratio& y);
    friend Ratio operator/(const Ratio& x, const Ratio& y);
    Ratio& operator+=(const Ratio& y) { return *this = *this + y; }
    Ratio& operator-=(const Ratio& y) { return *this = *this - y; }
    Ratio& operator*=(const Ratio& y) { return *this = *this * y; }
    Ratio& operator/=(const Ratio& y) { return *this = *this / y; }
    Ratio pow(long n) const;
    Ratio inverse() const;

    double evaluate(const std::vector<double>& values) const;
    std::string to_string() const;

    // Builds num/prod(factors), merging repeated bases and cancelling.
    static Ratio assemble(Poly num, std::vector<Factor> den);

private:
    Poly num_;
    std::vector<Factor> den_;
};

// x.num*y.den - y.num*x.den == 0, computed with the least common factor list.
bool ratio_eq(const Ratio& x, const Ratio& y);

Ratio partial_derivative(const Ratio& x, Var v);

using Bindings = std::map<Var, Ratio>;

// Simultaneous substitution. Throws AlgebraError if a denominator becomes 0.
Ratio substitute(const Ratio& x, const Bindings& bindings);

// Substitutes v^n -> value; every exponent of v must be a multiple of n.
Ratio substitute_power(const Ratio& x, Var v, unsigned n, const Ratio& value);

}  // namespace moment::sym
