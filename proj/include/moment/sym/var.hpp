#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace moment::sym {

// Fixed symbol universe. Order matters: it is the lex order of monomials.
enum class Var : std::uint8_t {
    k, k2, K, c, a, w, g, m, p, q, k11, k12, k22, nphi
};

inline constexpr std::size_t kVarCount = 14;

std::string_view var_name(Var v);
std::optional<Var> var_from_name(std::string_view name);

inline constexpr std::size_t index(Var v) { return static_cast<std::size_t>(v); }
inline constexpr Var var_at(std::size_t i) { return static_cast<Var>(i); }

}  // namespace moment::sym
