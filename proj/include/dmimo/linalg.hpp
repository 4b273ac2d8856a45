// SPDX-License-Identifier: Apache-2.0
//
// dmimo — uplink combining and spectral-efficiency simulator for
// distributed massive MIMO under pilot contamination
// Copyright (C) 2026 dmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#ifndef DMIMO_LINALG_HPP
#define DMIMO_LINALG_HPP

#include <armadillo>
#include <stdexcept>

namespace dmimo {

/// Cholesky-backed solver for Hermitian positive definite systems.
/// We never form explicit inverses of the statistical matrices; every
/// application goes through two triangular solves.
class HpdSolver {
  public:
    HpdSolver() = default;

    explicit HpdSolver(const arma::cx_mat& A) {
        if (!arma::chol(upper_, A))
            throw std::runtime_error("HpdSolver: matrix is not positive definite");
    }

    arma::cx_vec solve(const arma::cx_vec& b) const {
        arma::cx_vec y = arma::solve(arma::trimatl(upper_.t()), b);
        return arma::solve(arma::trimatu(upper_), y);
    }

    arma::cx_mat solve(const arma::cx_mat& B) const {
        arma::cx_mat y = arma::solve(arma::trimatl(upper_.t()), B);
        return arma::solve(arma::trimatu(upper_), y);
    }

    bool empty() const { return upper_.n_elem == 0; }
    const arma::cx_mat& upper() const { return upper_; }

  private:
    arma::cx_mat upper_;  // A = upper^H * upper
};

/// tr(A * B) without forming the product.
inline std::complex<double> trace_product(const arma::cx_mat& A, const arma::cx_mat& B) {
    return arma::accu(A % B.st());
}

/// Applies ((Qtr^T) kron Q)^{-1} vec(X) through the identity
/// (A^T kron B)^{-1} vec(X) = vec(B^{-1} X A^{-1}), so the Kronecker
/// product is never materialized.
inline arma::cx_mat kron_inverse_apply(const HpdSolver& Q, const HpdSolver& Qtr,
                                       const arma::cx_mat& X) {
    const arma::cx_mat left = Q.solve(X);
    return arma::cx_mat(Qtr.solve(arma::cx_mat(left.t())).t());
}

}  // namespace dmimo

#endif  // DMIMO_LINALG_HPP
