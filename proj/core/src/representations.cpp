#include "snsrec/representations.hpp"

#include <algorithm>

namespace snsrec::rep {

namespace {

void flatten(const std::vector<data::TemporalSet>& previous,
             std::vector<int>& items, std::vector<int>& setpos) {
  items.clear();
  setpos.clear();
  for (size_t a = 0; a < previous.size(); ++a)
    for (int item : previous[a].items) {
      items.push_back(item);
      setpos.push_back(static_cast<int>(a));
    }
  if (items.empty()) throw EmptyError("empty previous-set sequence");
}

void check_items(const std::vector<int>& items, int vocab) {
  for (int item : items)
    if (item < 0 || item >= vocab)
      throw IndexOutOfRangeError("item " + std::to_string(item) +
                                 " outside vocab " + std::to_string(vocab));
}

}  // namespace

MatrixXd item_level_pfr(const std::vector<data::TemporalSet>& previous,
                        const ModelParams& p, ItemLevelCache& cache) {
  flatten(previous, cache.items, cache.setpos);
  check_items(cache.items, p.dims.vocab);
  auto e_p = p.t("e_p");
  auto pos = p.t("pos");

  const Eigen::Index n = cache.items.size();
  cache.x.resize(p.dims.d, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int pidx = std::min(cache.setpos[i], p.dims.max_pos - 1);
    cache.x.col(i) = e_p.col(cache.items[i]) + pos.col(pidx);
  }
  cache.out = mhsa_forward(p.t("mhsa_p.wq"), p.t("mhsa_p.wk"),
                           p.t("mhsa_p.wv"), p.t("mhsa_p.wo"), cache.x,
                           p.dims.heads, cache.mhsa);
  cache.summary = cache.out.rowwise().mean();
  return cache.out;
}

void item_level_backward(const ModelParams& p, const ItemLevelCache& cache,
                         const VectorXd& gsummary, GradBuffer& g) {
  const Eigen::Index n = cache.items.size();
  MatrixXd gout = (gsummary / double(n)).replicate(1, n);
  MatrixXd gx;
  mhsa_backward(p.t("mhsa_p.wq"), p.t("mhsa_p.wk"), p.t("mhsa_p.wv"),
                p.t("mhsa_p.wo"), p.dims.heads, cache.mhsa, gout,
                g.t("mhsa_p.wq"), g.t("mhsa_p.wk"), g.t("mhsa_p.wv"),
                g.t("mhsa_p.wo"), gx);
  auto ge_p = g.t("e_p");
  auto gpos = g.t("pos");
  for (Eigen::Index i = 0; i < n; ++i) {
    ge_p.col(cache.items[i]) += gx.col(i);
    gpos.col(std::min(cache.setpos[i], p.dims.max_pos - 1)) += gx.col(i);
  }
}

VectorXd set_level_pfr(const std::vector<data::TemporalSet>& previous,
                       const ModelParams& p, SetLevelCache& cache) {
  if (previous.empty()) throw EmptyError("no previous sets");
  auto e_p = p.t("e_p");
  const Eigen::Index n_sets = previous.size();
  const int kq = p.dims.n_queries;

  cache.set_items.clear();
  cache.per_set.assign(n_sets, QueryAttnCache{});
  cache.set_vecs.resize(p.dims.d, n_sets);
  for (Eigen::Index a = 0; a < n_sets; ++a) {
    const auto& items = previous[a].items;
    if (items.empty()) throw EmptyError("empty set in sequence");
    check_items(items, p.dims.vocab);
    cache.set_items.push_back(items);
    MatrixXd x(p.dims.d, items.size());
    for (size_t i = 0; i < items.size(); ++i) x.col(i) = e_p.col(items[i]);
    MatrixXd out = query_attn_forward(p.t("set_q"), p.t("set.wk"),
                                      p.t("set.wv"), x, cache.per_set[a]);
    cache.set_vecs.col(a) = out.rowwise().sum() / double(kq);
  }
  cache.out = mhsa_forward(p.t("mhsa_s.wq"), p.t("mhsa_s.wk"),
                           p.t("mhsa_s.wv"), p.t("mhsa_s.wo"), cache.set_vecs,
                           p.dims.heads, cache.mhsa);
  cache.summary = cache.out.rowwise().mean();
  return cache.summary;
}

void set_level_backward(const ModelParams& p, const SetLevelCache& cache,
                        const VectorXd& gsummary, GradBuffer& g) {
  const Eigen::Index n_sets = cache.set_vecs.cols();
  const int kq = p.dims.n_queries;
  MatrixXd gout = (gsummary / double(n_sets)).replicate(1, n_sets);
  MatrixXd gset_vecs;
  mhsa_backward(p.t("mhsa_s.wq"), p.t("mhsa_s.wk"), p.t("mhsa_s.wv"),
                p.t("mhsa_s.wo"), p.dims.heads, cache.mhsa, gout,
                g.t("mhsa_s.wq"), g.t("mhsa_s.wk"), g.t("mhsa_s.wv"),
                g.t("mhsa_s.wo"), gset_vecs);
  auto ge_p = g.t("e_p");
  for (Eigen::Index a = 0; a < n_sets; ++a) {
    MatrixXd gattn_out =
        (gset_vecs.col(a) / double(kq)).replicate(1, kq);
    MatrixXd gx;
    query_attn_backward(p.t("set_q"), p.t("set.wk"), p.t("set.wv"),
                        cache.per_set[a], gattn_out, g.t("set_q"),
                        g.t("set.wk"), g.t("set.wv"), gx);
    const auto& items = cache.set_items[a];
    for (size_t i = 0; i < items.size(); ++i)
      ge_p.col(items[i]) += gx.col(i);
  }
}

VectorXd fuse_preference(const VectorXd& h_item, const VectorXd& h_set,
                         const ModelParams& p, GateCache& cache) {
  auto wg = p.t("gate.w");
  auto bg = p.t("gate.b");
  const int d = p.dims.d;
  VectorXd z = wg.leftCols(d) * h_item + wg.rightCols(d) * h_set + bg.col(0);
  cache.h_item = h_item;
  cache.h_set = h_set;
  cache.gate = (1.0 / (1.0 + (-z.array()).exp())).matrix();
  cache.p_s = cache.gate.array() * h_item.array() +
              (1.0 - cache.gate.array()) * h_set.array();
  return cache.p_s;
}

void fuse_backward(const ModelParams& p, const GateCache& cache,
                   const VectorXd& gp, GradBuffer& g, VectorXd& gh_item,
                   VectorXd& gh_set) {
  const int d = p.dims.d;
  auto wg = p.t("gate.w");
  gh_item = (cache.gate.array() * gp.array()).matrix();
  gh_set = ((1.0 - cache.gate.array()) * gp.array()).matrix();
  VectorXd ggate =
      ((cache.h_item - cache.h_set).array() * gp.array()).matrix();
  VectorXd gz = (ggate.array() * cache.gate.array() *
                 (1.0 - cache.gate.array())).matrix();
  auto gwg = g.t("gate.w");
  gwg.leftCols(d) += gz * cache.h_item.transpose();
  gwg.rightCols(d) += gz * cache.h_set.transpose();
  g.t("gate.b").col(0) += gz;
  gh_item += wg.leftCols(d).transpose() * gz;
  gh_set += wg.rightCols(d).transpose() * gz;
}

VectorXd preference_forward(const std::vector<data::TemporalSet>& previous,
                            const ModelParams& p, PrefCache& cache) {
  item_level_pfr(previous, p, cache.item);
  set_level_pfr(previous, p, cache.set);
  return fuse_preference(cache.item.summary, cache.set.summary, p,
                         cache.fuse);
}

void preference_backward(const ModelParams& p, const PrefCache& cache,
                         const VectorXd& gp_s, GradBuffer& g) {
  VectorXd gh_item, gh_set;
  fuse_backward(p, cache.fuse, gp_s, g, gh_item, gh_set);
  item_level_backward(p, cache.item, gh_item, g);
  set_level_backward(p, cache.set, gh_set, g);
}

double preference_score(const VectorXd& p_s, int item, const ModelParams& p) {
  if (item < 0 || item >= p.dims.vocab)
    throw IndexOutOfRangeError("item outside vocab");
  return p_s.dot(p.t("e_p").col(item));
}

MatrixXd co_occurrence_reps(const std::vector<data::TemporalSet>& previous,
                            const ModelParams& p, CoCache& cache) {
  std::vector<int> setpos;
  flatten(previous, cache.items, setpos);
  check_items(cache.items, p.dims.vocab);
  auto e_c = p.t("e_c");

  const Eigen::Index n = cache.items.size();
  cache.x.resize(p.dims.d, n);
  for (Eigen::Index i = 0; i < n; ++i)
    cache.x.col(i) = e_c.col(cache.items[i]);
  cache.h_c = mhsa_forward(p.t("mhsa_c.wq"), p.t("mhsa_c.wk"),
                           p.t("mhsa_c.wv"), p.t("mhsa_c.wo"), cache.x,
                           p.dims.heads, cache.mhsa);
  cache.c_s = item_attn_forward(p.t("ioa.wq"), p.t("ioa.wk"), p.t("ioa.wv"),
                                cache.h_c, e_c, cache.ioa);
  return cache.c_s;
}

void co_occurrence_backward(const ModelParams& p, const CoCache& cache,
                            const MatrixXd& gc_s, GradBuffer& g) {
  MatrixXd gh, ge_direct;
  item_attn_backward(p.t("ioa.wq"), p.t("ioa.wk"), p.t("ioa.wv"), p.t("e_c"),
                     cache.ioa, gc_s, g.t("ioa.wq"), g.t("ioa.wk"),
                     g.t("ioa.wv"), gh, ge_direct);
  g.t("e_c") += ge_direct;  // candidate-side path through Wq E^C
  MatrixXd gx;
  mhsa_backward(p.t("mhsa_c.wq"), p.t("mhsa_c.wk"), p.t("mhsa_c.wv"),
                p.t("mhsa_c.wo"), p.dims.heads, cache.mhsa, gh,
                g.t("mhsa_c.wq"), g.t("mhsa_c.wk"), g.t("mhsa_c.wv"),
                g.t("mhsa_c.wo"), gx);
  auto ge_c = g.t("e_c");
  for (size_t i = 0; i < cache.items.size(); ++i)
    ge_c.col(cache.items[i]) += gx.col(i);
}

}  // namespace snsrec::rep
