#pragma once

#include "hprec/types.hpp"

// Small dense helpers shared by the precoder designs.
namespace hprec::linalg {

// Relative eigenvalue floor below which a Gram matrix is treated as singular.
inline constexpr double kRankTolerance = 1e-10;

// Hermitian part of a square matrix, (A + A^*) / 2.
CMatrix hermitian_part(const CMatrix& a);

// Descending eigenvalues of a Hermitian matrix.
RVector eigenvalues_desc(const CMatrix& hermitian);

// sum_{l < n_terms} log2(1 + scale * eig_l), eigenvalues sorted descending.
// Negative round-off eigenvalues are clamped to zero.
double log_sum(const RVector& eig_desc, double scale, int n_terms);

// Orthonormal basis of the column span, via modified Gram-Schmidt with one
// reorthogonalization pass. Throws RankDeficient when a column is (nearly)
// inside the span of its predecessors.
CMatrix orthonormal_basis(const CMatrix& columns);

// Component of v orthogonal to the span of the orthonormal columns of q.
CVector orthogonal_component(const CMatrix& q, const CVector& v);

// Eigenvalues of diag(d) + w-rank-one update, i.e. diag(d) + z z^* with
// |z_j|^2 = weights_j. Solved with the secular equation; result descending.
RVector rank_one_update_eigenvalues(const RVector& d, const RVector& weights);

}  // namespace hprec::linalg
