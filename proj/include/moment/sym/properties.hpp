#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "moment/sym/ratio.hpp"

namespace moment::sym {

Poly random_poly(std::mt19937_64& rng, int max_terms = 4, int max_degree = 3);
Ratio random_ratio(std::mt19937_64& rng);

struct PropertyTally {
    int cases = 0;
    int failures = 0;
    std::string first_failure;
};

// Each runs `cases` randomized trials and checks identities with ratio_eq.
PropertyTally check_field_axioms(int cases, std::uint64_t seed);
PropertyTally check_derivative_rules(int cases, std::uint64_t seed);
PropertyTally check_collect_reconstruct(int cases, std::uint64_t seed);
PropertyTally check_solve2x2(int cases, std::uint64_t seed);

}  // namespace moment::sym
