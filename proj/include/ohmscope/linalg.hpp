#pragma once

#include <cstddef>
#include <vector>

namespace ohmscope {

struct EigenDecomposition {
    std::vector<double> values;                // descending
    std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i]
};

// Cyclic Jacobi rotations on a symmetric matrix. Converged when the
// off-diagonal Frobenius norm falls below tol * max(1, diagonal norm).
// Ties in eigenvalues keep the lower original column first.
EigenDecomposition eigen_symmetric(const std::vector<std::vector<double>>& a, double tol = 1e-10);

// Lower-triangular L with L L^T = a; throws SingularityError when a is not
// positive definite.
std::vector<std::vector<double>> cholesky(const std::vector<std::vector<double>>& a);

// Solves a x = b given the cholesky factor of a.
std::vector<double> cholesky_solve(const std::vector<std::vector<double>>& lower,
                                   const std::vector<double>& b);

}  // namespace ohmscope
