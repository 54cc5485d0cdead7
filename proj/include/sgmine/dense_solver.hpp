#pragma once

#include <vector>

namespace sgmine {

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// A is row-major n x n. Throws NumericError when a pivot falls below tol.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, double tol = 1e-12);

} // namespace sgmine
