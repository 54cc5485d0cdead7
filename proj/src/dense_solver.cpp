#include "sgmine/dense_solver.hpp"

#include <cmath>
#include <cstddef>

#include "sgmine/errors.hpp"

namespace sgmine {

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, double tol) {
    const std::size_t n = b.size();
    auto at = [&](std::size_t row, std::size_t col) -> double& { return a[row * n + col]; };

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(at(row, col)) > std::abs(at(pivot, col))) pivot = row;
        if (std::abs(at(pivot, col)) < tol)
            throw NumericError("singular linear system");
        if (pivot != col) {
            for (std::size_t k = col; k < n; ++k) std::swap(at(pivot, k), at(col, k));
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            double factor = at(row, col) / at(col, col);
            if (factor == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) at(row, k) -= factor * at(col, k);
            b[row] -= factor * b[col];
        }
    }

    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double sum = b[i];
        for (std::size_t k = i + 1; k < n; ++k) sum -= at(i, k) * x[k];
        x[i] = sum / at(i, i);
    }
    return x;
}

} // namespace sgmine
