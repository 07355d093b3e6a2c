#pragma once

#include <functional>
#include <vector>

namespace pinchlab {

/// Spearman rank correlation; average ranks on ties.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of log(y) against log(x); pairs with non-positive
/// entries are skipped. Used to report empirical power-law exponents.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Cholesky factor of a dense symmetric positive definite matrix (row-major
/// k x k). Returns false when a pivot falls below tol.
bool cholesky_lower(int k, const std::vector<double>& m, std::vector<double>& L,
                    double tol = 1e-12);

/// Inverse of a lower-triangular matrix (row-major k x k).
std::vector<double> lower_triangular_inverse(int k, const std::vector<double>& L);

/// Nelder-Mead downhill simplex; returns the best point found.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double step, int max_iter,
                                double* fmin = nullptr);

} // namespace pinchlab
