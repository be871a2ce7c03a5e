#include "moment/sym/var.hpp"

#include <array>

namespace moment::sym {

namespace {
constexpr std::array<std::string_view, kVarCount> kNames = {
    "k", "k2", "K", "c", "a", "w", "g", "m", "p", "q", "k11", "k12", "k22", "nphi"};
}

std::string_view var_name(Var v) { return kNames[index(v)]; }

std::optional<Var> var_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kVarCount; ++i)
        if (kNames[i] == name) return var_at(i);
    return std::nullopt;
}

}  // namespace moment::sym
