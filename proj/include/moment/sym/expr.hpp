#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "moment/sym/ratio.hpp"

namespace moment::sym {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t offset);
    std::size_t offset;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' ['-'] integer)?
//   base   := integer | name | '(' expr ')' | '-' base
// Unary minus belongs to base, so "-k^2" is (-k)^2; write -(k^2).
struct Expr {
    enum class Kind { integer, variable, reference, add, sub, mul, div, pow, neg };
    Kind kind = Kind::integer;
    mpz_class value;    // integer
    Var var{};          // variable
    std::string name;   // reference
    long exponent = 0;  // pow
    ExprPtr lhs, rhs;   // binary ops; lhs only for pow/neg
};

bool ast_equal(const Expr& x, const Expr& y);

struct ParseOptions {
    // When set, identifiers outside the universe parse as references.
    bool allow_references = false;
};

ExprPtr parse_expr(const std::string& text, ParseOptions opts = {});
std::string print_expr(const Expr& e);

// Names referenced (not universe variables) anywhere in the tree.
std::set<std::string> references(const Expr& e);

using Environment = std::map<std::string, Ratio>;

// Throws std::runtime_error for an unbound reference.
Ratio lower(const Expr& e, const Environment& env = {});

// parse + lower, for tests and literals.
Ratio parse_ratio(const std::string& text, const Environment& env = {});

}  // namespace moment::sym
