#pragma once

#include <utility>
#include <vector>

#include "enpar/rational.hpp"

namespace enpar {

// Exact solution of A x = b with A sparse nonsingular. Rows hold (column,
// coefficient) pairs; zero coefficients may be omitted. Pivots are chosen by
// Markowitz cost, which keeps fill low on the banded systems produced by
// energy unfoldings. Throws Err::Internal on a singular system.
std::vector<Rat> solve_linear_sparse(int n, std::vector<std::vector<std::pair<int, Rat>>> rows,
                                     std::vector<Rat> rhs);

// Dense fraction-free (Bareiss) elimination over the integers after row
// scaling. Reference solver; cross-checked against the sparse path in tests.
std::vector<Rat> solve_linear_bareiss(std::vector<std::vector<Rat>> a, std::vector<Rat> rhs);

}  // namespace enpar
