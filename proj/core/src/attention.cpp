#include "snsrec/attention.hpp"

#include <cmath>

namespace snsrec::rep {

MatrixXd colwise_softmax(const MatrixXd& scores) {
  MatrixXd out(scores.rows(), scores.cols());
  for (Eigen::Index j = 0; j < scores.cols(); ++j) {
    Eigen::VectorXd col = scores.col(j);
    col.array() -= col.maxCoeff();
    col = col.array().exp();
    out.col(j) = col / col.sum();
  }
  return out;
}

MatrixXd colwise_softmax_backward(const MatrixXd& a, const MatrixXd& ga) {
  MatrixXd gs(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double dot = a.col(j).dot(ga.col(j));
    gs.col(j) = a.col(j).array() * (ga.col(j).array() - dot);
  }
  return gs;
}

MatrixXd mhsa_forward(MatRef wq, MatRef wk, MatRef wv, MatRef wo,
                      const MatrixXd& x, int heads, MhsaCache& cache) {
  const Eigen::Index d = x.rows();
  const Eigen::Index n = x.cols();
  const Eigen::Index dh = d / heads;
  const double scale = 1.0 / std::sqrt(double(dh));

  cache.x = x;
  cache.q = wq * x;
  cache.k = wk * x;
  cache.v = wv * x;
  cache.attn.assign(heads, MatrixXd());
  cache.concat.resize(d, n);
  for (int h = 0; h < heads; ++h) {
    auto qh = cache.q.middleRows(h * dh, dh);
    auto kh = cache.k.middleRows(h * dh, dh);
    auto vh = cache.v.middleRows(h * dh, dh);
    MatrixXd scores = (kh.transpose() * qh) * scale;  // n x n
    cache.attn[h] = colwise_softmax(scores);
    cache.concat.middleRows(h * dh, dh) = vh * cache.attn[h];
  }
  return wo * cache.concat;
}

void mhsa_backward(MatRef wq, MatRef wk, MatRef wv, MatRef wo, int heads,
                   const MhsaCache& cache, const MatrixXd& gout,
                   Eigen::Ref<MatrixXd> gwq, Eigen::Ref<MatrixXd> gwk,
                   Eigen::Ref<MatrixXd> gwv, Eigen::Ref<MatrixXd> gwo,
                   MatrixXd& gx) {
  const Eigen::Index d = cache.x.rows();
  const Eigen::Index dh = d / heads;
  const double scale = 1.0 / std::sqrt(double(dh));

  gwo += gout * cache.concat.transpose();
  MatrixXd gconcat = wo.transpose() * gout;

  MatrixXd gq(d, cache.x.cols()), gk(d, cache.x.cols()),
      gv(d, cache.x.cols());
  for (int h = 0; h < heads; ++h) {
    auto qh = cache.q.middleRows(h * dh, dh);
    auto kh = cache.k.middleRows(h * dh, dh);
    auto vh = cache.v.middleRows(h * dh, dh);
    const MatrixXd& a = cache.attn[h];
    MatrixXd goh = gconcat.middleRows(h * dh, dh);

    gv.middleRows(h * dh, dh) = goh * a.transpose();
    MatrixXd ga = vh.transpose() * goh;               // n x n
    MatrixXd gs = colwise_softmax_backward(a, ga) * scale;
    gk.middleRows(h * dh, dh) = qh * gs.transpose();
    gq.middleRows(h * dh, dh) = kh * gs;
  }
  gwq += gq * cache.x.transpose();
  gwk += gk * cache.x.transpose();
  gwv += gv * cache.x.transpose();
  gx = wq.transpose() * gq + wk.transpose() * gk + wv.transpose() * gv;
}

MatrixXd query_attn_forward(MatRef queries, MatRef wk, MatRef wv,
                            const MatrixXd& x, QueryAttnCache& cache) {
  const double scale = 1.0 / std::sqrt(double(x.rows()));
  cache.x = x;
  cache.k = wk * x;
  cache.v = wv * x;
  MatrixXd scores = (cache.k.transpose() * queries) * scale;  // m x Kq
  cache.attn = colwise_softmax(scores);
  return cache.v * cache.attn;  // d x Kq
}

void query_attn_backward(MatRef queries, MatRef wk, MatRef wv,
                         const QueryAttnCache& cache, const MatrixXd& gout,
                         Eigen::Ref<MatrixXd> gqueries,
                         Eigen::Ref<MatrixXd> gwk, Eigen::Ref<MatrixXd> gwv,
                         MatrixXd& gx) {
  const double scale = 1.0 / std::sqrt(double(cache.x.rows()));
  MatrixXd gv = gout * cache.attn.transpose();          // d x m
  MatrixXd ga = cache.v.transpose() * gout;             // m x Kq
  MatrixXd gs = colwise_softmax_backward(cache.attn, ga) * scale;
  gqueries += cache.k * gs;                             // d x Kq
  MatrixXd gk = queries * gs.transpose();               // d x m
  gwk += gk * cache.x.transpose();
  gwv += gv * cache.x.transpose();
  gx = wk.transpose() * gk + wv.transpose() * gv;
}

MatrixXd item_attn_forward(MatRef wq, MatRef wk, MatRef wv, const MatrixXd& h,
                           MatRef embeddings, ItemAttnCache& cache) {
  cache.h = h;
  cache.qm = wq * embeddings;        // d x V
  cache.km = wk * h;                 // d x n
  cache.vm = wv * h;                 // d x n
  cache.attn = colwise_softmax(cache.km.transpose() * cache.qm);  // n x V
  return cache.vm * cache.attn;      // d x V
}

void item_attn_backward(MatRef wq, MatRef wk, MatRef wv, MatRef embeddings,
                        const ItemAttnCache& cache, const MatrixXd& gout,
                        Eigen::Ref<MatrixXd> gwq, Eigen::Ref<MatrixXd> gwk,
                        Eigen::Ref<MatrixXd> gwv, MatrixXd& gh,
                        MatrixXd& gembeddings) {
  MatrixXd gvm = gout * cache.attn.transpose();       // d x n
  MatrixXd ga = cache.vm.transpose() * gout;          // n x V
  MatrixXd gs = colwise_softmax_backward(cache.attn, ga);
  MatrixXd gkm = cache.qm * gs.transpose();           // d x n
  MatrixXd gqm = cache.km * gs;                       // d x V

  gwv += gvm * cache.h.transpose();
  gwk += gkm * cache.h.transpose();
  gwq += gqm * embeddings.transpose();
  gh = wv.transpose() * gvm + wk.transpose() * gkm;
  gembeddings = wq.transpose() * gqm;
}

}  // namespace snsrec::rep
