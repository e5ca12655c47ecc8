#pragma once

#include <optional>

#include "multiness/linalg.hpp"

namespace multiness::detail {

// Leading `count` eigenpairs (by magnitude) of a dense symmetric matrix using a
// block Krylov subspace with full reorthogonalization and Rayleigh-Ritz
// extraction. Every returned pair satisfies ||M x - theta x|| <= tol * max(1, |theta_1|).
// Returns nullopt when the subspace would have to grow past half of n, in which
// case a dense decomposition is cheaper.
std::optional<EigenPair> block_krylov_leading(const Matrix& m, Index count,
                                              double tol = 1e-11);

}  // namespace multiness::detail
