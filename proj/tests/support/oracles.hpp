#pragma once

// Independent reference computations for tests. Nothing here calls the library
// routine it is used to check.

#include <cstdint>
#include <functional>
#include <vector>

#include "multiness/model.hpp"

namespace oracle {

using multiness::Index;
using multiness::Matrix;
using multiness::Vector;

Matrix random_symmetric(Index n, std::uint64_t seed, double scale = 1.0);
Matrix random_gaussian(Index rows, Index cols, std::uint64_t seed);

// Singular value thresholding through a general SVD: U S_T(Sigma) V^T.
Matrix svd_soft_threshold(const Matrix& m, double t);

// Nuclear norm from a general SVD.
double svd_nuclear_norm(const Matrix& m);

// 0.5 ||M - X||_F^2 + t ||X||_*.
double prox_objective(const Matrix& m, const Matrix& x, double t);

// Full eigenvalues, unordered, from a plain symmetric eigensolver.
Vector plain_eigenvalues(const Matrix& m);

// Ratio-1 Marchenko-Pastur CDF in closed form and its median by bisection.
double mp_cdf_closed_form(double x);
double mp_median_closed_form();

// Central finite difference of f along the symmetric direction e_ij + e_ji
// (e_ii on the diagonal).
double symmetric_fd(const std::function<double(const Matrix&)>& f, const Matrix& at, Index i, Index j, double h);

// Logistic regression by plain Newton on an explicit design matrix.
Vector newton_logistic(const Matrix& x, const Vector& y, int iters = 100);

// Least squares on an explicit design matrix via complete orthogonal decomposition.
Vector least_squares(const Matrix& x, const Vector& y);

// Best column-sign pattern by enumerating all 2^d choices.
std::vector<int> brute_force_signs(const Matrix& xhat, const Matrix& xref);

// The alternating soft-thresholding update written out directly:
// F = S_{lambda/m}(mean_k (A_k - G_k)), G_k = S_{lambda alpha_k}(A_k - F).
void alternating_soft_threshold(const std::vector<Matrix>& a, const std::vector<Matrix>& g_prev, double lambda,
                                const std::vector<double>& alphas, Matrix& f_out, std::vector<Matrix>& g_out);

double mean(const std::vector<double>& v);

}  // namespace oracle
