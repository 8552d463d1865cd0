#include "snsrec/linalg.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

namespace snsrec::la {

void validate_index_set(const IndexSet& idx, Eigen::Index dim) {
  int prev = -1;
  for (int i : idx) {
    if (i <= prev)
      throw IndexOutOfRangeError("index set not strictly increasing");
    if (i < 0 || i >= dim)
      throw IndexOutOfRangeError("index " + std::to_string(i) +
                                 " out of range for dim " +
                                 std::to_string(dim));
    prev = i;
  }
}

void validate_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols())
    throw ShapeMismatchError("matrix not square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol)
    throw ShapeMismatchError("matrix not symmetric");
}

Matrix submatrix(const Matrix& m, const IndexSet& idx) {
  Matrix out(idx.size(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

double logdet_psd(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  static const double jitters[] = {0.0, 1e-10, 1e-8, 1e-6};
  // scale the ladder with the matrix so rank-deficient kernels with large
  // entries still factor once jitter is applied
  const double scale =
      std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  for (double delta : jitters) {
    Matrix j = m;
    if (delta > 0) j.diagonal().array() += delta * scale;
    Eigen::LLT<Matrix> llt(j);
    if (llt.info() == Eigen::Success) {
      double acc = 0.0;
      Vector diag = llt.matrixLLT().diagonal();
      bool ok = true;
      for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (!(diag(i) > 0) || !std::isfinite(diag(i))) {
          ok = false;
          break;
        }
        acc += std::log(diag(i));
      }
      if (ok) return 2.0 * acc;
    }
  }
  throw NotPsdError("Cholesky failed after max jitter escalation");
}

double dpp_unnormalized_prob(const Matrix& l, const IndexSet& y) {
  validate_index_set(y, l.rows());
  if (y.empty()) return 1.0;
  return submatrix(l, y).determinant();
}

double conditional_sdpp_prob(const Matrix& l, const IndexSet& a,
                             const IndexSet& b) {
  validate_index_set(a, l.rows());
  validate_index_set(b, l.rows());
  for (int i : a)
    for (int j : b)
      if (i == j) throw OverlappingSetsError("A and B overlap at " +
                                             std::to_string(i));
  IndexSet ab;
  ab.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(ab));

  Matrix norm = l;
  std::vector<bool> in_a(l.rows(), false);
  for (int i : a) in_a[i] = true;
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    if (!in_a[i]) norm(i, i) += 1.0;

  double num = dpp_unnormalized_prob(l, ab);
  double den = norm.determinant();
  if (!(den > 0) || !std::isfinite(den))
    throw NotPsdError("normalizer determinant not positive");
  return num / den;
}

std::map<IndexSet, double> enumerate_conditional_oracle(const Matrix& l,
                                                        const IndexSet& a) {
  const Eigen::Index dim = l.rows();
  if (dim > 20) throw TooLargeError("enumeration limited to dim <= 20");
  validate_index_set(a, dim);

  std::vector<int> free_idx;
  std::vector<bool> in_a(dim, false);
  for (int i : a) in_a[i] = true;
  for (int i = 0; i < dim; ++i)
    if (!in_a[i]) free_idx.push_back(i);

  std::map<IndexSet, double> out;
  double total = 0.0;
  const uint64_t count = uint64_t{1} << free_idx.size();
  for (uint64_t mask = 0; mask < count; ++mask) {
    IndexSet y = a;
    for (size_t bit = 0; bit < free_idx.size(); ++bit)
      if (mask & (uint64_t{1} << bit)) y.push_back(free_idx[bit]);
    std::sort(y.begin(), y.end());
    double det = dpp_unnormalized_prob(l, y);
    out[y] = det;
    total += det;
  }
  for (auto& [key, val] : out) val /= total;
  return out;
}

}  // namespace snsrec::la
