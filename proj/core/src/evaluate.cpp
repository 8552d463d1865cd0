#include "snsrec/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace snsrec::eval {

Ranking rank_items(const VectorXd& scores) {
  Ranking r;
  r.items.resize(scores.size());
  std::iota(r.items.begin(), r.items.end(), 0);
  std::sort(r.items.begin(), r.items.end(), [&](int a, int b) {
    if (scores(a) != scores(b)) return scores(a) > scores(b);
    return a < b;
  });
  r.scores.reserve(r.items.size());
  for (int i : r.items) r.scores.push_back(scores(i));
  return r;
}

VectorXd predict_scores(const std::vector<data::TemporalSet>& prefix,
                        const rep::ModelParams& params, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw InvalidSpecError("lambda must be in [0,1]");
  if (prefix.empty()) throw EmptyError("empty prefix");

  rep::PrefCache pref;
  VectorXd p_s = rep::preference_forward(prefix, params, pref);
  VectorXd scores = (1.0 - lambda) * (params.t("e_p").transpose() * p_s);
  if (lambda > 0.0) {
    rep::CoCache co;
    MatrixXd c_s = rep::co_occurrence_reps(prefix, params, co);
    VectorXd c_bar = c_s.rowwise().mean();
    scores += lambda * (c_s.transpose() * c_bar);
  }
  return scores;
}

MetricsRow evaluate_topn(const Ranking& rank, const data::TemporalSet& target,
                         const data::CategoryMap& categories,
                         int total_categories, int n,
                         const EvalOptions& opts) {
  if (n > static_cast<int>(rank.items.size()))
    throw TooLargeError("top-n exceeds ranking length");

  MetricsRow row;
  std::unordered_set<int> relevant(target.items.begin(), target.items.end());

  int hits = 0;
  double dcg = 0.0;
  std::unordered_set<int> cats_seen;
  for (int pos = 0; pos < n; ++pos) {
    const int item = rank.items[pos];
    if (relevant.count(item)) {
      ++hits;
      dcg += 1.0 / std::log2(pos + 2.0);
    }
    cats_seen.insert(categories.at(item));
  }
  row.recall = relevant.empty() ? 0.0 : double(hits) / double(relevant.size());

  double idcg = 0.0;
  const int ideal = std::min<int>(n, static_cast<int>(relevant.size()));
  for (int pos = 0; pos < ideal; ++pos) idcg += 1.0 / std::log2(pos + 2.0);
  row.ndcg = idcg > 0 ? dcg / idcg : 0.0;

  row.cc = total_categories > 0
               ? double(cats_seen.size()) / double(total_categories)
               : 0.0;

  double dist_sum = 0.0;
  long pairs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ++pairs;
      if (opts.ild_embedding && opts.factor) {
        const auto& a = opts.factor->a;
        Eigen::VectorXd ri = a.row(rank.items[i]).transpose();
        Eigen::VectorXd rj = a.row(rank.items[j]).transpose();
        const double denom = ri.norm() * rj.norm();
        dist_sum += denom > 0 ? 1.0 - ri.dot(rj) / denom : 1.0;
      } else {
        dist_sum +=
            categories.at(rank.items[i]) != categories.at(rank.items[j]) ? 1.0
                                                                         : 0.0;
      }
    }
  row.ild = pairs > 0 ? dist_sum / double(pairs) : 0.0;

  const double quality = 0.5 * (row.recall + row.ndcg);
  const double diversity = 0.5 * (row.cc + row.ild);
  row.f1 = (quality + diversity) > 0
               ? 2.0 * quality * diversity / (quality + diversity)
               : 0.0;
  return row;
}

double bce_baseline_loss(const data::TrainingInstance& inst,
                         const rep::ModelParams& params,
                         rep::GradBuffer* g) {
  rep::PrefCache pref;
  VectorXd p_s = rep::preference_forward(inst.previous, params, pref);

  std::vector<std::pair<int, double>> labeled;  // item, label
  for (const auto& s : inst.targets)
    for (int item : s.items) labeled.emplace_back(item, 1.0);
  for (const auto& s : inst.negatives)
    for (int item : s.items) labeled.emplace_back(item, 0.0);
  if (labeled.empty()) throw EmptyError("no labeled items for BCE");

  auto e_p = params.t("e_p");
  double loss = 0.0;
  VectorXd gp_s = VectorXd::Zero(params.dims.d);
  for (auto [item, y] : labeled) {
    const double s = p_s.dot(e_p.col(item));
    // stable log(1 + exp(.)) forms
    const double softplus =
        s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
    loss += softplus - y * s;
    if (g) {
      const double sigma = 1.0 / (1.0 + std::exp(-s));
      const double ds = (sigma - y) / double(labeled.size());
      gp_s += ds * e_p.col(item);
      g->t("e_p").col(item) += ds * p_s;
    }
  }
  loss /= double(labeled.size());
  if (g) rep::preference_backward(params, pref, gp_s, *g);
  return loss;
}

}  // namespace snsrec::eval
