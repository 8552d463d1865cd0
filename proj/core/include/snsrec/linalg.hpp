#ifndef SNSREC_LINALG_HPP
#define SNSREC_LINALG_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "snsrec/errors.hpp"

namespace snsrec::la {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Sorted, duplicate-free indices into a companion matrix.
using IndexSet = std::vector<int>;

// Throws unless `idx` is strictly increasing and within [0, dim).
void validate_index_set(const IndexSet& idx, Eigen::Index dim);

// Throws unless `m` is square and symmetric to within `tol`.
void validate_symmetric(const Matrix& m, double tol = 1e-12);

// Principal submatrix m[idx, idx].
Matrix submatrix(const Matrix& m, const IndexSet& idx);

// log det of a symmetric PSD matrix via Cholesky, escalating diagonal
// jitter through {0, 1e-10, 1e-8, 1e-6} before giving up.
// The 0x0 matrix has log det 0 (empty determinant is 1).
double logdet_psd(const Matrix& m);

// det(L_Y); empty Y gives 1.
double dpp_unnormalized_prob(const Matrix& l, const IndexSet& y);

// det(L_{A u B}) / det(L + I_notA) where I_notA has ones on the diagonal
// for elements outside A. A and B must be disjoint.
double conditional_sdpp_prob(const Matrix& l, const IndexSet& a,
                             const IndexSet& b);

// Exact conditional distribution over all supersets of `a` by full
// enumeration; dim must be <= 20.
std::map<IndexSet, double> enumerate_conditional_oracle(const Matrix& l,
                                                        const IndexSet& a);

}  // namespace snsrec::la

#endif
