#pragma once

#include <optional>
#include <vector>

#include "dormant/fp.hpp"
#include "dormant/ratfunc.hpp"

namespace dormant {

using FpRow = std::vector<fp_t>;
using FpMatrix = std::vector<FpRow>;

// Solution set {particular + span(kernel)} of A z = b over F_p.
struct AffineSolution {
  std::vector<fp_t> particular;
  std::vector<std::vector<fp_t>> kernel;
};

// A is m x n (rows may be empty when n = 0); nullopt when inconsistent.
std::optional<AffineSolution> solve_affine(FpMatrix a, std::vector<fp_t> b, std::size_t n, fp_t p);

// Square system over F_p(x); nullopt when singular.
std::optional<std::vector<RatFunc>> solve_square(std::vector<std::vector<RatFunc>> m,
                                                 std::vector<RatFunc> b);

}  // namespace dormant
