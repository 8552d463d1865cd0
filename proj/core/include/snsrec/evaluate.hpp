#ifndef SNSREC_EVALUATE_HPP
#define SNSREC_EVALUATE_HPP

#include <Eigen/Dense>
#include <vector>

#include "snsrec/diversity.hpp"
#include "snsrec/representations.hpp"

namespace snsrec::eval {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Items in descending score order, ties broken by ascending item id.
struct Ranking {
  std::vector<int> items;
  std::vector<double> scores;
};

Ranking rank_items(const VectorXd& scores);

// Blended per-item score (1-lambda) * preference + lambda * mean cohesion,
// with the mean cohesion computed against all candidate columns.
VectorXd predict_scores(const std::vector<data::TemporalSet>& prefix,
                        const rep::ModelParams& params, double lambda);

struct MetricsRow {
  double recall = 0.0;
  double ndcg = 0.0;
  double cc = 0.0;
  double ild = 0.0;
  double f1 = 0.0;
};

struct EvalOptions {
  // default item distance for ILD is categorical disagreement; the
  // embedding-cosine variant uses diversity-factor rows instead
  bool ild_embedding = false;
  const div::DiversityFactor* factor = nullptr;
};

MetricsRow evaluate_topn(const Ranking& rank, const data::TemporalSet& target,
                         const data::CategoryMap& categories,
                         int total_categories, int n,
                         const EvalOptions& opts = {});

// Mean binary cross-entropy over target items (label 1) and negative-set
// items (label 0), scored by logistic(preference score). Shares the exact
// preference tower, so SDPP-vs-BCE comparisons isolate the objective.
// Accumulates d loss / d Theta into `g` when non-null.
double bce_baseline_loss(const data::TrainingInstance& inst,
                         const rep::ModelParams& params,
                         rep::GradBuffer* g = nullptr);

}  // namespace snsrec::eval

#endif
