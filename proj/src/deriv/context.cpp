#include "moment/deriv/context.hpp"

#include "moment/sym/linear.hpp"

namespace moment::deriv {

using sym::Poly;

namespace {

constexpr std::array<std::pair<ContextKind, std::string_view>, 5> kNames = {{
    {ContextKind::k_nonzero_open, "K_NONZERO_OPEN"},
    {ContextKind::k_nonzero_closed, "K_NONZERO_CLOSED"},
    {ContextKind::flat, "FLAT"},
    {ContextKind::cpc, "CPC"},
    {ContextKind::cmc, "CMC"},
}};

Ratio V(Var v) { return Ratio::var(v); }

}  // namespace

std::string_view kind_name(ContextKind k) {
    for (auto& [kind, name] : kNames)
        if (kind == k) return name;
    return "?";
}

std::optional<ContextKind> kind_from_name(std::string_view name) {
    for (auto& [kind, n] : kNames)
        if (n == name) return kind;
    return std::nullopt;
}

std::optional<Ratio> Context::rule(int dir, Var v) const {
    const auto& t = table_.at(static_cast<std::size_t>(dir - 1));
    auto it = t.find(v);
    if (it == t.end()) return std::nullopt;
    return it->second;
}

Ratio Context::expand(const Ratio& x) const { return defs_.empty() ? x : sym::substitute(x, defs_); }

Ratio derive(const Context& ctx, int dir, const Ratio& x) {
    if (dir != 1 && dir != 2) throw DerivationError("direction must be 1 or 2");
    Ratio y = ctx.expand(x);
    Ratio out;
    std::uint32_t sup = y.support();
    for (std::size_t i = 0; i < sym::kVarCount; ++i) {
        if (!((sup >> i) & 1u)) continue;
        Var v = sym::var_at(i);
        auto r = ctx.rule(dir, v);
        if (!r)
            throw DerivationError("no e" + std::to_string(dir) + " rule for '" + std::string(sym::var_name(v)) +
                                  "' in " + std::string(kind_name(ctx.kind())));
        if (r->is_zero()) continue;
        out += sym::partial_derivative(y, v) * *r;
    }
    return out;
}

std::pair<Ratio, Ratio> codazzi_omegas(const Context& ctx) {
    if (ctx.kind() == ContextKind::cmc) throw DerivationError("Codazzi connection needs a principal-curvature context");
    Ratio diff = ctx.kappa1() - ctx.kappa2();
    if (diff.is_zero()) throw DerivationError("umbilic context: k1 - k2 vanishes");
    return {derive(ctx, 2, ctx.kappa1()) / diff, derive(ctx, 1, ctx.kappa2()) / diff};
}

Ratio gauss_residual(const Context& ctx) {
    if (ctx.kind() == ContextKind::cmc) throw DerivationError("Gauss residual needs a principal-curvature context");
    const Ratio& k1 = ctx.kappa1();
    const Ratio& k2 = ctx.kappa2();
    Ratio diff = k1 - k2;
    if (diff.is_zero()) throw DerivationError("umbilic context: k1 - k2 vanishes");
    Ratio d1k2 = derive(ctx, 1, k2);
    Ratio d2k1 = derive(ctx, 2, k1);
    Ratio rhs = -derive(ctx, 1, d1k2 / diff) + derive(ctx, 2, d2k1 / diff) - (d1k2 * d1k2 + d2k1 * d2k1) / (diff * diff);
    return k1 * k2 - rhs;
}

Context make_context(ContextKind kind) {
    Context ctx;
    ctx.kind_ = kind;
    const Ratio k = V(Var::k), K = V(Var::K), c = V(Var::c), a = V(Var::a), w = V(Var::w);
    const Ratio g = V(Var::g), m = V(Var::m);
    const bool k_nonzero = kind == ContextKind::k_nonzero_open || kind == ContextKind::k_nonzero_closed;

    ctx.kappa1_ = k;
    switch (kind) {
        case ContextKind::k_nonzero_open:
        case ContextKind::k_nonzero_closed: ctx.kappa2_ = K / k; break;
        case ContextKind::flat: ctx.kappa2_ = Ratio(0); break;
        case ContextKind::cpc: ctx.kappa2_ = c; break;
        case ContextKind::cmc: ctx.kappa2_ = V(Var::k2); break;
    }
    ctx.mean_ = kind == ContextKind::cmc ? c : ctx.kappa1_ + ctx.kappa2_;
    if (kind != ContextKind::cmc) ctx.defs_[Var::k2] = ctx.kappa2_;

    // Raw tables, with g and m still symbols.
    auto& d1 = ctx.table_[0];
    auto& d2 = ctx.table_[1];
    for (Var constant : {Var::K, Var::c, Var::a}) {
        d1[constant] = Ratio(0);
        d2[constant] = Ratio(0);
    }
    d1[Var::k] = V(Var::p);
    d2[Var::k] = V(Var::q);
    d1[Var::w] = 2 * g;
    d2[Var::w] = 2 * m;
    if (kind == ContextKind::cmc) {
        d1[Var::nphi] = -k * g;
        d2[Var::nphi] = -V(Var::k2) * m;
    } else {
        d1[Var::p] = V(Var::k11);
        d1[Var::q] = V(Var::k12);
        d2[Var::p] = V(Var::k12);
        d2[Var::q] = V(Var::k22);
    }

    auto& named = ctx.named_;
    named["kappa1"] = ctx.kappa1_;
    named["kappa2"] = ctx.kappa2_;
    named["H"] = ctx.mean_;
    if (kind == ContextKind::cmc) {
        for (auto& t : ctx.table_)
            for (auto& [v, r] : t) ctx.vars_ |= 1u << sym::index(v);
        return ctx;
    }

    // Normal-part relations of the lemma, with g, m symbolic.
    const Ratio h_over = ctx.mean_ * w / a;
    Ratio lemma5 = derive(ctx, 1, h_over) + g * ctx.kappa1_;
    Ratio lemma6 = derive(ctx, 2, h_over) + m * ctx.kappa2_;
    named["lemma5"] = lemma5;
    named["lemma6"] = lemma6;

    if (k_nonzero) ctx.defs_[Var::g] = sym::solve_affine(lemma5, Var::g);
    if (k_nonzero || kind == ContextKind::flat || kind == ContextKind::cpc)
        ctx.defs_[Var::m] = sym::solve_affine(lemma6, Var::m);
    for (auto& t : ctx.table_)
        for (auto& [v, r] : t) r = ctx.expand(r);

    Ratio gamma = ctx.expand(g), mu = ctx.expand(m);
    named["gamma"] = gamma;
    named["mu"] = mu;
    auto [om1, om2] = codazzi_omegas(ctx);
    named["omega1"] = om1;
    named["omega2"] = om2;
    // Tangential relations: right-hand sides of e1(g), e2(g), e1(m), e2(m).
    Ratio hw = ctx.expand(h_over);
    named["lemma1"] = mu * om1 + hw * ctx.kappa1_ + 1;
    named["lemma2"] = mu * om2;
    named["lemma3"] = -gamma * om1;
    named["lemma4"] = -gamma * om2 + hw * ctx.kappa2_ + 1;

    if (kind == ContextKind::k_nonzero_closed) {
        // Jets solved from e_i(g), e_i(m) against the lemma, in the open field.
        Ratio e11 = sym::solve_affine(derive(ctx, 1, g) - named["lemma1"], Var::k11);
        Ratio e12 = sym::solve_affine(derive(ctx, 1, m) - named["lemma3"], Var::k12);
        Ratio e22 = sym::solve_affine(derive(ctx, 2, m) - named["lemma4"], Var::k22);
        ctx.defs_[Var::k11] = e11;
        ctx.defs_[Var::k12] = e12;
        ctx.defs_[Var::k22] = e22;
        for (auto& t : ctx.table_)
            for (auto& [v, r] : t) r = ctx.expand(r);
        named["e11"] = e11;
        named["e12"] = e12;
        named["e22"] = e22;
    }
    named["gauss"] = gauss_residual(ctx);

    for (auto& t : ctx.table_)
        for (auto& [v, r] : t)
            if (!ctx.is_defined(v)) ctx.vars_ |= 1u << sym::index(v);
    return ctx;
}

}  // namespace moment::deriv
