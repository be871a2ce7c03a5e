#include "moment/sym/expr.hpp"

#include <cctype>
#include <limits>

namespace moment::sym {

ParseError::ParseError(const std::string& what, std::size_t off)
    : std::runtime_error(what + " at offset " + std::to_string(off)), offset(off) {}

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr binary(Expr::Kind k, ExprPtr l, ExprPtr r) {
    Expr e;
    e.kind = k;
    e.lhs = std::move(l);
    e.rhs = std::move(r);
    return node(std::move(e));
}

class Parser {
public:
    Parser(const std::string& s, ParseOptions o) : src_(s), opts_(o) {}

    ExprPtr run() {
        skip();
        if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
        ExprPtr e = expr();
        skip();
        if (pos_ != src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return e;
    }

private:
    const std::string& src_;
    ParseOptions opts_;
    std::size_t pos_ = 0;

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    ExprPtr expr() {
        ExprPtr l = term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++pos_;
            l = binary(c == '+' ? Expr::Kind::add : Expr::Kind::sub, l, term());
        }
        return l;
    }

    ExprPtr term() {
        ExprPtr l = factor();
        for (char c = peek(); c == '*' || c == '/'; c = peek()) {
            ++pos_;
            l = binary(c == '*' ? Expr::Kind::mul : Expr::Kind::div, l, factor());
        }
        return l;
    }

    ExprPtr factor() {
        ExprPtr b = base();
        if (peek() != '^') return b;
        ++pos_;
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        } else if (peek() == '+') {
            ++pos_;
        }
        skip();
        std::size_t start = pos_;
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
            throw ParseError("expected integer exponent", pos_);
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string digits = src_.substr(start, pos_ - start);
        if (digits.size() > 6) throw ParseError("exponent too large", start);
        Expr e;
        e.kind = Expr::Kind::pow;
        e.lhs = b;
        e.exponent = std::stol(digits) * (neg ? -1 : 1);
        return node(std::move(e));
    }

    ExprPtr base() {
        char c = peek();
        if (c == '\0') throw ParseError("unexpected end of input", pos_);
        if (c == '-') {
            ++pos_;
            Expr e;
            e.kind = Expr::Kind::neg;
            e.lhs = base();
            return node(std::move(e));
        }
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            Expr e;
            e.kind = Expr::Kind::integer;
            e.value = mpz_class(src_.substr(start, pos_ - start));
            return node(std::move(e));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '.'))
                ++pos_;
            std::string name = src_.substr(start, pos_ - start);
            if (auto v = var_from_name(name)) {
                Expr e;
                e.kind = Expr::Kind::variable;
                e.var = *v;
                return node(std::move(e));
            }
            if (!opts_.allow_references) throw ParseError("unknown variable '" + name + "'", start);
            Expr e;
            e.kind = Expr::Kind::reference;
            e.name = std::move(name);
            return node(std::move(e));
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }
};

// Precedence levels for printing: 1 sum, 2 product, 3 power, 4 base.
int level(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::add:
        case Expr::Kind::sub: return 1;
        case Expr::Kind::mul:
        case Expr::Kind::div: return 2;
        case Expr::Kind::pow: return 3;
        default: return 4;
    }
}

void print(const Expr& e, std::string& out);

void print_at(const Expr& e, int min_level, std::string& out) {
    if (level(e) < min_level) {
        out += "(";
        print(e, out);
        out += ")";
    } else {
        print(e, out);
    }
}

void print(const Expr& e, std::string& out) {
    switch (e.kind) {
        case Expr::Kind::integer: out += e.value.get_str(); break;
        case Expr::Kind::variable: out += var_name(e.var); break;
        case Expr::Kind::reference: out += e.name; break;
        case Expr::Kind::add:
        case Expr::Kind::sub:
            print_at(*e.lhs, 1, out);
            out += e.kind == Expr::Kind::add ? " + " : " - ";
            print_at(*e.rhs, 2, out);
            break;
        case Expr::Kind::mul:
        case Expr::Kind::div:
            print_at(*e.lhs, 2, out);
            out += e.kind == Expr::Kind::mul ? "*" : "/";
            print_at(*e.rhs, 3, out);
            break;
        case Expr::Kind::pow:
            print_at(*e.lhs, 4, out);
            out += "^" + std::to_string(e.exponent);
            break;
        case Expr::Kind::neg:
            out += "-";
            print_at(*e.lhs, 4, out);
            break;
    }
}

void collect_refs(const Expr& e, std::set<std::string>& out) {
    if (e.kind == Expr::Kind::reference) out.insert(e.name);
    if (e.lhs) collect_refs(*e.lhs, out);
    if (e.rhs) collect_refs(*e.rhs, out);
}

}  // namespace

bool ast_equal(const Expr& x, const Expr& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case Expr::Kind::integer: return x.value == y.value;
        case Expr::Kind::variable: return x.var == y.var;
        case Expr::Kind::reference: return x.name == y.name;
        case Expr::Kind::pow: return x.exponent == y.exponent && ast_equal(*x.lhs, *y.lhs);
        case Expr::Kind::neg: return ast_equal(*x.lhs, *y.lhs);
        default: return ast_equal(*x.lhs, *y.lhs) && ast_equal(*x.rhs, *y.rhs);
    }
}

ExprPtr parse_expr(const std::string& text, ParseOptions opts) { return Parser(text, opts).run(); }

std::string print_expr(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

std::set<std::string> references(const Expr& e) {
    std::set<std::string> out;
    collect_refs(e, out);
    return out;
}

Ratio lower(const Expr& e, const Environment& env) {
    switch (e.kind) {
        case Expr::Kind::integer: return Ratio(mpq_class(e.value));
        case Expr::Kind::variable: return Ratio::var(e.var);
        case Expr::Kind::reference: {
            auto it = env.find(e.name);
            if (it == env.end()) throw std::runtime_error("unknown name '" + e.name + "'");
            return it->second;
        }
        case Expr::Kind::add: return lower(*e.lhs, env) + lower(*e.rhs, env);
        case Expr::Kind::sub: return lower(*e.lhs, env) - lower(*e.rhs, env);
        case Expr::Kind::mul: return lower(*e.lhs, env) * lower(*e.rhs, env);
        case Expr::Kind::div: return lower(*e.lhs, env) / lower(*e.rhs, env);
        case Expr::Kind::pow: return lower(*e.lhs, env).pow(e.exponent);
        case Expr::Kind::neg: return -lower(*e.lhs, env);
    }
    return {};
}

Ratio parse_ratio(const std::string& text, const Environment& env) {
    ParseOptions o;
    o.allow_references = !env.empty();
    return lower(*parse_expr(text, o), env);
}

}  // namespace moment::sym
