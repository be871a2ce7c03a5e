#include "moment/sym/poly.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <queue>
#include <sstream>

namespace moment::sym {

namespace {

constexpr std::uint64_t kHighBits = 0x8080808080808080ULL;

std::atomic<std::size_t>& guard() {
    static std::atomic<std::size_t> g = [] {
        std::size_t n = 2'000'000;
        if (const char* env = std::getenv("MOMENT_MAX_TERMS")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end != env && v > 0) n = static_cast<std::size_t>(v);
        }
        return n;
    }();
    return g;
}

inline int shift_of(std::size_t i) { return 56 - 8 * static_cast<int>(i % 8); }

}  // namespace

std::size_t max_terms() { return guard().load(); }
void set_max_terms(std::size_t n) { guard().store(n); }

// ---- Monomial

Monomial Monomial::of(Var v, unsigned e) {
    Monomial m;
    m.set(v, e);
    return m;
}

unsigned Monomial::degree(Var v) const {
    std::size_t i = index(v);
    std::uint64_t word = i < 8 ? hi_ : lo_;
    return static_cast<unsigned>((word >> shift_of(i)) & 0xffu);
}

void Monomial::set(Var v, unsigned e) {
    if (e > kMaxDegree) throw SizeLimitError("exponent exceeds 127");
    std::size_t i = index(v);
    std::uint64_t& word = i < 8 ? hi_ : lo_;
    int s = shift_of(i);
    word = (word & ~(std::uint64_t{0xff} << s)) | (std::uint64_t{e} << s);
}

unsigned Monomial::total_degree() const {
    unsigned t = 0;
    for (std::size_t i = 0; i < kVarCount; ++i) t += degree(var_at(i));
    return t;
}

bool Monomial::divisible_by(Monomial d) const {
    return (((hi_ | kHighBits) - d.hi_) & kHighBits) == kHighBits &&
           (((lo_ | kHighBits) - d.lo_) & kHighBits) == kHighBits;
}

Monomial Monomial::operator*(Monomial o) const {
    Monomial r;
    r.hi_ = hi_ + o.hi_;
    r.lo_ = lo_ + o.lo_;
    if ((r.hi_ | r.lo_) & kHighBits) throw SizeLimitError("exponent exceeds 127");
    return r;
}

Monomial Monomial::operator/(Monomial d) const {
    Monomial r;
    r.hi_ = hi_ - d.hi_;
    r.lo_ = lo_ - d.lo_;
    return r;
}

Monomial Monomial::gcd(Monomial x, Monomial y) {
    Monomial r;
    for (std::size_t i = 0; i < kVarCount; ++i) {
        Var v = var_at(i);
        r.set(v, std::min(x.degree(v), y.degree(v)));
    }
    return r;
}

std::uint32_t Monomial::support() const {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < kVarCount; ++i)
        if (degree(var_at(i))) s |= 1u << i;
    return s;
}

// ---- Poly

Poly::Poly(long n) {
    if (n != 0) terms_.push_back({Monomial{}, mpq_class(n)});
}

Poly::Poly(const mpq_class& c) {
    if (sgn(c) != 0) terms_.push_back({Monomial{}, c});
}

Poly Poly::var(Var v, unsigned e) { return monomial(Monomial::of(v, e), 1); }

Poly Poly::monomial(Monomial m, const mpq_class& c) {
    Poly p;
    if (sgn(c) != 0) p.terms_.push_back({m, c});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.mono > y.mono; });
    Poly p;
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
            p.terms_.back().coef += t.coef;
            if (sgn(p.terms_.back().coef) == 0) p.terms_.pop_back();
        } else if (sgn(t.coef) != 0) {
            p.terms_.push_back(std::move(t));
        }
    }
    p.check_size();
    return p;
}

void Poly::check_size() const {
    if (terms_.size() > max_terms())
        throw SizeLimitError("polynomial exceeds term guard (" + std::to_string(terms_.size()) + " terms)");
}

mpq_class Poly::constant_value() const { return terms_.empty() ? mpq_class(0) : terms_[0].coef; }

unsigned Poly::degree(Var v) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree(v));
    return d;
}

std::uint32_t Poly::support() const {
    std::uint64_t hi = 0, lo = 0;
    for (const auto& t : terms_) {
        hi |= t.mono.hi_;
        lo |= t.mono.lo_;
    }
    Monomial m;
    m.hi_ = hi;
    m.lo_ = lo;
    // OR of packed bytes is non-zero exactly where some exponent is.
    return m.support();
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
}

Poly add_sub(const Poly& x, const Poly& y, bool subtract) {
    Poly r;
    r.terms_.reserve(x.terms_.size() + y.terms_.size());
    auto i = x.terms_.begin(), ie = x.terms_.end();
    auto j = y.terms_.begin(), je = y.terms_.end();
    while (i != ie || j != je) {
        if (j == je || (i != ie && i->mono > j->mono)) {
            r.terms_.push_back(*i++);
        } else if (i == ie || j->mono > i->mono) {
            r.terms_.push_back({j->mono, subtract ? mpq_class(-j->coef) : j->coef});
            ++j;
        } else {
            mpq_class c = subtract ? mpq_class(i->coef - j->coef) : mpq_class(i->coef + j->coef);
            if (sgn(c) != 0) r.terms_.push_back({i->mono, std::move(c)});
            ++i;
            ++j;
        }
    }
    r.check_size();
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    return *this = add_sub(*this, o, false);
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.is_zero()) return *this;
    return *this = add_sub(*this, o, true);
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

// Heap-based product (Johnson): one cursor per term of the shorter factor.
Poly operator*(const Poly& x, const Poly& y) {
    if (x.is_zero() || y.is_zero()) return {};
    const Poly& a = x.size() <= y.size() ? x : y;
    const Poly& b = x.size() <= y.size() ? y : x;
    if (a.size() == 1) return b.shifted(a.terms_[0].mono).scaled(a.terms_[0].coef);

    struct Cursor {
        Monomial mono;
        std::size_t i, j;
        bool operator<(const Cursor& o) const { return mono < o.mono; }
    };
    std::priority_queue<Cursor> heap;
    for (std::size_t i = 0; i < a.size(); ++i) heap.push({a.terms_[i].mono * b.terms_[0].mono, i, 0});

    Poly r;
    mpq_class acc, prod;
    while (!heap.empty()) {
        Cursor cur = heap.top();
        Monomial mono = cur.mono;
        acc = 0;
        while (!heap.empty() && heap.top().mono == mono) {
            cur = heap.top();
            heap.pop();
            prod = a.terms_[cur.i].coef * b.terms_[cur.j].coef;
            acc += prod;
            if (cur.j + 1 < b.size()) heap.push({a.terms_[cur.i].mono * b.terms_[cur.j + 1].mono, cur.i, cur.j + 1});
        }
        if (sgn(acc) != 0) {
            r.terms_.push_back({mono, acc});
            if (r.terms_.size() > max_terms()) r.check_size();
        }
    }
    return r;
}

Poly Poly::scaled(const mpq_class& c) const {
    if (sgn(c) == 0) return {};
    Poly r = *this;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
}

Poly Poly::shifted(Monomial m) const {
    Poly r = *this;
    for (auto& t : r.terms_) t.mono = t.mono * m;
    return r;
}

Poly Poly::pow(unsigned n) const {
    Poly result(1), base = *this;
    while (n) {
        if (n & 1u) result *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return result;
}

Poly Poly::derivative(Var v) const {
    // Dividing every surviving monomial by v keeps lex order intact.
    Poly r;
    for (const auto& t : terms_) {
        unsigned e = t.mono.degree(v);
        if (!e) continue;
        Monomial m = t.mono;
        m.set(v, e - 1);
        r.terms_.push_back({m, t.coef * e});
    }
    return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
    if (d.is_zero()) throw AlgebraError("division by zero polynomial");
    if (is_zero()) return Poly{};
    if (d.size() == 1) {
        const Term& t = d.terms_[0];
        Poly r;
        r.terms_.reserve(terms_.size());
        mpq_class inv = 1 / t.coef;
        for (const auto& s : terms_) {
            if (!s.mono.divisible_by(t.mono)) return std::nullopt;
            r.terms_.push_back({s.mono / t.mono, s.coef * inv});
        }
        return r;
    }
    // Cheap rejections.
    if (!leading().mono.divisible_by(d.leading().mono)) return std::nullopt;
    if (!terms_.back().mono.divisible_by(d.terms_.back().mono)) return std::nullopt;
    std::uint32_t sup = support();
    if ((d.support() & ~sup) != 0) return std::nullopt;
    for (std::size_t i = 0; i < kVarCount; ++i) {
        Var v = var_at(i);
        if ((d.support() >> i) & 1u)
            if (d.degree(v) > degree(v)) return std::nullopt;
    }

    std::map<Monomial, mpq_class, std::greater<>> rem;
    for (const auto& t : terms_) rem.emplace_hint(rem.end(), t.mono, t.coef);
    const Term& dl = d.leading();
    mpq_class inv = 1 / dl.coef;
    std::vector<Term> quot;
    while (!rem.empty()) {
        auto it = rem.begin();
        if (!it->first.divisible_by(dl.mono)) return std::nullopt;
        Monomial qm = it->first / dl.mono;
        mpq_class qc = it->second * inv;
        rem.erase(it);
        for (std::size_t k = 1; k < d.terms_.size(); ++k) {
            Monomial m = d.terms_[k].mono * qm;
            auto [pos, inserted] = rem.try_emplace(m, 0);
            pos->second -= qc * d.terms_[k].coef;
            if (sgn(pos->second) == 0) rem.erase(pos);
        }
        quot.push_back({qm, std::move(qc)});
        if (quot.size() > max_terms()) throw SizeLimitError("quotient exceeds term guard");
    }
    Poly r;
    r.terms_ = std::move(quot);
    return r;
}

mpq_class Poly::content() const {
    if (terms_.empty()) return 1;
    mpz_class num = 0, den = 1;
    for (const auto& t : terms_) {
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coef.get_num_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.get_den_mpz_t());
    }
    mpq_class c(num, den);
    c.canonicalize();
    return c;
}

Monomial Poly::monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_[0].mono;
    for (const auto& t : terms_) g = Monomial::gcd(g, t.mono);
    return g;
}

std::optional<Poly> Poly::deflate(Var v, unsigned n) const {
    if (n == 1) return *this;
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        unsigned e = t.mono.degree(v);
        if (e % n) return std::nullopt;
        Monomial m = t.mono;
        m.set(v, e / n);
        out.push_back({m, t.coef});
    }
    return from_terms(std::move(out));
}

std::vector<Poly> Poly::coefficients(Var v) const {
    if (is_zero()) return {};
    std::vector<std::vector<Term>> buckets(degree(v) + 1);
    for (const auto& t : terms_) {
        unsigned e = t.mono.degree(v);
        Monomial m = t.mono;
        m.set(v, 0);
        buckets[e].push_back({m, t.coef});
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
    return out;
}

double Poly::evaluate(const std::vector<double>& values) const {
    double s = 0;
    for (const auto& t : terms_) {
        double x = t.coef.get_d();
        for (std::size_t i = 0; i < kVarCount; ++i) {
            unsigned e = t.mono.degree(var_at(i));
            for (unsigned k = 0; k < e; ++k) x *= values[i];
        }
        s += x;
    }
    return s;
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        mpq_class c = t.coef;
        bool neg = sgn(c) < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        bool wrote = false;
        // "-k^2" would read as (-k)^2, so a leading minus keeps its 1.
        bool guard_sign = first && neg && t.mono.total_degree() > 1;
        if (c != 1 || t.mono.is_one() || guard_sign) {
            os << rational_to_string(c);
            wrote = true;
        }
        first = false;
        for (std::size_t i = 0; i < kVarCount; ++i) {
            unsigned e = t.mono.degree(var_at(i));
            if (!e) continue;
            if (wrote) os << "*";
            os << var_name(var_at(i));
            if (e > 1) os << "^" << e;
            wrote = true;
        }
    }
    return os.str();
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].mono != o.terms_[i].mono || terms_[i].coef != o.terms_[i].coef) return false;
    return true;
}

int Poly::compare(const Poly& x, const Poly& y) {
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Term& s = x.terms_[i];
        const Term& t = y.terms_[i];
        if (s.mono != t.mono) return s.mono > t.mono ? 1 : -1;
        int c = cmp(s.coef, t.coef);
        if (c) return c > 0 ? 1 : -1;
    }
    if (x.size() != y.size()) return x.size() > y.size() ? 1 : -1;
    return 0;
}

}  // namespace moment::sym
