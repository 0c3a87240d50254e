#include "ohmscope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ohmscope/errors.hpp"

namespace ohmscope {

EigenDecomposition eigen_symmetric(const std::vector<std::vector<double>>& a, double tol) {
    std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw DomainError("eigen_symmetric: matrix not square");

    std::vector<std::vector<double>> m = a;
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += m[p][q] * m[p][q];
        return std::sqrt(2.0 * s);
    };
    auto diag_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p) s += m[p][p] * m[p][p];
        return std::sqrt(s);
    };

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && n > 1; ++sweep) {
        if (off_norm() <= tol * std::max(1.0, diag_norm())) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (m[p][q] == 0.0) continue;
                double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if (n > 1 && off_norm() > tol * std::max(1.0, diag_norm()))
        throw FitError("eigen_symmetric: no convergence in 100 sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return m[i][i] > m[j][j]; });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.assign(n, std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
        out.values[r] = m[order[r]][order[r]];
        for (std::size_t k = 0; k < n; ++k) out.vectors[r][k] = v[k][order[r]];
    }
    return out;
}

std::vector<std::vector<double>> cholesky(const std::vector<std::vector<double>>& a) {
    std::size_t n = a.size();
    std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (s <= 0.0) throw SingularityError("cholesky: matrix not positive definite");
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    return l;
}

std::vector<double> cholesky_solve(const std::vector<std::vector<double>>& lower,
                                   const std::vector<double>& b) {
    std::size_t n = lower.size();
    if (b.size() != n) throw DomainError("cholesky_solve: dimension mismatch");
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower[i][k] * y[k];
        y[i] = s / lower[i][i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower[k][ii] * x[k];
        x[ii] = s / lower[ii][ii];
    }
    return x;
}

}  // namespace ohmscope
