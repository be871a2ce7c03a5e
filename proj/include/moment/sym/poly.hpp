#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "moment/sym/var.hpp"

namespace moment::sym {

// Raised when an intermediate result exceeds the term guard.
struct SizeLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown for algebraic preconditions (division by zero, singular systems...).
struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Term-count guard; MOMENT_MAX_TERMS overrides the 2e6 default.
std::size_t max_terms();
void set_max_terms(std::size_t n);

// Exponent vector packed one byte per variable, var 0 in the top byte of hi.
// Plain integer comparison then gives lex order with k most significant.
class Monomial {
public:
    static constexpr unsigned kMaxDegree = 127;

    Monomial() = default;
    static Monomial of(Var v, unsigned e = 1);

    unsigned degree(Var v) const;
    void set(Var v, unsigned e);
    unsigned total_degree() const;
    bool is_one() const { return hi_ == 0 && lo_ == 0; }

    bool divisible_by(Monomial d) const;
    Monomial operator*(Monomial o) const;
    Monomial operator/(Monomial d) const;  // requires divisible_by
    static Monomial gcd(Monomial x, Monomial y);

    // Bitmask of variables with non-zero exponent.
    std::uint32_t support() const;

    auto operator<=>(const Monomial&) const = default;
    bool operator==(const Monomial&) const = default;

    std::size_t hash() const { return std::hash<std::uint64_t>{}(hi_ * 0x9e3779b97f4a7c15ULL ^ lo_); }

private:
    std::uint64_t hi_ = 0, lo_ = 0;
    friend class Poly;
};

struct Term {
    Monomial mono;
    mpq_class coef;
};

// Sparse polynomial, terms sorted by strictly decreasing monomial.
class Poly {
public:
    Poly() = default;
    Poly(long n);  // NOLINT: implicit constant
    explicit Poly(const mpq_class& c);
    static Poly var(Var v, unsigned e = 1);
    static Poly monomial(Monomial m, const mpq_class& c);
    // Takes arbitrary terms; sorts, merges duplicates and drops zeros.
    static Poly from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
    mpq_class constant_value() const;  // requires is_constant
    const Term& leading() const { return terms_.front(); }

    unsigned degree(Var v) const;
    std::uint32_t support() const;
    bool depends_on(Var v) const { return (support() >> index(v)) & 1u; }

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    friend Poly operator+(Poly x, const Poly& y) { return x += y; }
    friend Poly operator-(Poly x, const Poly& y) { return x -= y; }
    friend Poly operator*(const Poly& x, const Poly& y);
    Poly scaled(const mpq_class& c) const;
    Poly shifted(Monomial m) const;  // multiply by monomial
    Poly pow(unsigned n) const;

    Poly derivative(Var v) const;

    // Exact division; nullopt if divisor does not divide this.
    std::optional<Poly> divide_exact(const Poly& d) const;

    // Positive rational c with this = c * primitive integer poly (sign kept in poly).
    mpq_class content() const;
    // Monomial gcd of all terms.
    Monomial monomial_content() const;

    // Replace every exponent e of v by e/n; nullopt if some e is not divisible.
    std::optional<Poly> deflate(Var v, unsigned n) const;

    // c_0..c_d in v; empty for zero.
    std::vector<Poly> coefficients(Var v) const;

    double evaluate(const std::vector<double>& values) const;

    std::string to_string() const;

    bool operator==(const Poly& o) const;
    // Total order used to keep factor lists canonical.
    static int compare(const Poly& x, const Poly& y);

private:
    std::vector<Term> terms_;
    void check_size() const;
    friend Poly add_sub(const Poly&, const Poly&, bool);
};

std::string rational_to_string(const mpq_class& q);

}  // namespace moment::sym
