#ifndef SNSREC_ATTENTION_HPP
#define SNSREC_ATTENTION_HPP

#include <Eigen/Dense>
#include <vector>

namespace snsrec::rep {

using Eigen::MatrixXd;
using MatRef = Eigen::Ref<const Eigen::MatrixXd>;

// Column-wise softmax; each output column sums to 1.
MatrixXd colwise_softmax(const MatrixXd& scores);

// Given softmax output A and upstream gA, returns gScores.
MatrixXd colwise_softmax_backward(const MatrixXd& a, const MatrixXd& ga);

// Multi-head self-attention over x (d x n), scores scaled by 1/sqrt(d/H),
// heads split over projection rows, then an output projection.
struct MhsaCache {
  MatrixXd x, q, k, v;              // d x n
  std::vector<MatrixXd> attn;       // per head, n x n (columns sum to 1)
  MatrixXd concat;                  // d x n, pre output projection
};

MatrixXd mhsa_forward(MatRef wq, MatRef wk, MatRef wv, MatRef wo,
                      const MatrixXd& x, int heads, MhsaCache& cache);

void mhsa_backward(MatRef wq, MatRef wk, MatRef wv, MatRef wo, int heads,
                   const MhsaCache& cache, const MatrixXd& gout,
                   Eigen::Ref<MatrixXd> gwq, Eigen::Ref<MatrixXd> gwk,
                   Eigen::Ref<MatrixXd> gwv, Eigen::Ref<MatrixXd> gwo,
                   MatrixXd& gx);

// Trainable-query attention used to summarize one set: queries (d x Kq)
// attend over keys/values projected from x (d x m); scaled by 1/sqrt(d).
struct QueryAttnCache {
  MatrixXd x, k, v;   // d x m
  MatrixXd attn;      // m x Kq, columns sum to 1
};

MatrixXd query_attn_forward(MatRef queries, MatRef wk, MatRef wv,
                            const MatrixXd& x, QueryAttnCache& cache);

void query_attn_backward(MatRef queries, MatRef wk, MatRef wv,
                         const QueryAttnCache& cache, const MatrixXd& gout,
                         Eigen::Ref<MatrixXd> gqueries,
                         Eigen::Ref<MatrixXd> gwk, Eigen::Ref<MatrixXd> gwv,
                         MatrixXd& gx);

// Item-oriented attention: C = Wv H Softmax((Wk H)^T Wq E), softmax over
// the n sequence positions per candidate column. Unscaled scores.
struct ItemAttnCache {
  MatrixXd h;     // d x n
  MatrixXd qm;    // d x V  (Wq E)
  MatrixXd km;    // d x n  (Wk H)
  MatrixXd vm;    // d x n  (Wv H)
  MatrixXd attn;  // n x V, columns sum to 1
};

MatrixXd item_attn_forward(MatRef wq, MatRef wk, MatRef wv, const MatrixXd& h,
                           MatRef embeddings, ItemAttnCache& cache);

void item_attn_backward(MatRef wq, MatRef wk, MatRef wv, MatRef embeddings,
                        const ItemAttnCache& cache, const MatrixXd& gout,
                        Eigen::Ref<MatrixXd> gwq, Eigen::Ref<MatrixXd> gwk,
                        Eigen::Ref<MatrixXd> gwv, MatrixXd& gh,
                        MatrixXd& gembeddings);

}  // namespace snsrec::rep

#endif
