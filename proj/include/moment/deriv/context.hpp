#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "moment/sym/ratio.hpp"

namespace moment::deriv {

using sym::Ratio;
using sym::Var;

enum class ContextKind { k_nonzero_open, k_nonzero_closed, flat, cpc, cmc };

std::string_view kind_name(ContextKind k);  // "K_NONZERO_OPEN", ...
std::optional<ContextKind> kind_from_name(std::string_view name);

struct DerivationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A differential field: free symbols, defined symbols (k2, and g, m where the
// lemma fixes them) and the tables of e1, e2 on free symbols.
class Context {
public:
    ContextKind kind() const { return kind_; }

    // Bitmask of symbols that carry a table entry.
    std::uint32_t vars() const { return vars_; }
    const sym::Bindings& definitions() const { return defs_; }
    bool is_defined(Var v) const { return defs_.count(v) != 0; }
    // Table entry, already expanded; nullopt when v has no rule.
    std::optional<Ratio> rule(int dir, Var v) const;

    // Replace defined symbols by their definitions.
    Ratio expand(const Ratio& x) const;

    const Ratio& kappa1() const { return kappa1_; }
    const Ratio& kappa2() const { return kappa2_; }
    const Ratio& mean_curvature() const { return mean_; }

    // Named quantities visible to proof scripts.
    const std::map<std::string, Ratio>& quantities() const { return named_; }

private:
    friend Context make_context(ContextKind kind);
    ContextKind kind_{};
    std::uint32_t vars_ = 0;
    sym::Bindings defs_;
    std::array<std::map<Var, Ratio>, 2> table_;
    Ratio kappa1_, kappa2_, mean_;
    std::map<std::string, Ratio> named_;
};

Context make_context(ContextKind kind);

// Chain rule: sum over symbols v of dx/dv * D_dir(v), after expansion.
Ratio derive(const Context& ctx, int dir, const Ratio& x);

// (e2(k1)/(k1-k2), e1(k2)/(k1-k2)).
std::pair<Ratio, Ratio> codazzi_omegas(const Context& ctx);

// k1*k2 minus the line-of-curvature Gauss formula.
Ratio gauss_residual(const Context& ctx);

}  // namespace moment::deriv
