#ifndef SNSREC_REPRESENTATIONS_HPP
#define SNSREC_REPRESENTATIONS_HPP

#include <Eigen/Dense>
#include <vector>

#include "snsrec/attention.hpp"
#include "snsrec/data.hpp"
#include "snsrec/params.hpp"

namespace snsrec::rep {

using Eigen::VectorXd;

// Item-level tower: flattened items of the previous sets with positional
// embeddings indexed by set position, through self-attention.
struct ItemLevelCache {
  std::vector<int> items;
  std::vector<int> setpos;
  MatrixXd x;         // d x n
  MhsaCache mhsa;
  MatrixXd out;       // d x n
  VectorXd summary;   // mean over positions
};

// Set-level tower: trainable-query summaries per set (no positional term
// inside a set), then self-attention across the set vectors.
struct SetLevelCache {
  std::vector<std::vector<int>> set_items;
  std::vector<QueryAttnCache> per_set;
  MatrixXd set_vecs;  // d x A
  MhsaCache mhsa;
  MatrixXd out;       // d x A
  VectorXd summary;
};

struct GateCache {
  VectorXd h_item, h_set, gate, p_s;
};

struct PrefCache {
  ItemLevelCache item;
  SetLevelCache set;
  GateCache fuse;
};

// Co-occurrence tower: self-attention over sequence co-occurrence
// embeddings, then item-oriented attention against all candidates.
struct CoCache {
  std::vector<int> items;
  MatrixXd x;        // d x n
  MhsaCache mhsa;
  MatrixXd h_c;      // d x n
  ItemAttnCache ioa;
  MatrixXd c_s;      // d x |V|
};

MatrixXd item_level_pfr(const std::vector<data::TemporalSet>& previous,
                        const ModelParams& p, ItemLevelCache& cache);
void item_level_backward(const ModelParams& p, const ItemLevelCache& cache,
                         const VectorXd& gsummary, GradBuffer& g);

VectorXd set_level_pfr(const std::vector<data::TemporalSet>& previous,
                       const ModelParams& p, SetLevelCache& cache);
void set_level_backward(const ModelParams& p, const SetLevelCache& cache,
                        const VectorXd& gsummary, GradBuffer& g);

// g = sigmoid(W_g [h_item; h_set] + b_g); p = g.*h_item + (1-g).*h_set
VectorXd fuse_preference(const VectorXd& h_item, const VectorXd& h_set,
                         const ModelParams& p, GateCache& cache);
void fuse_backward(const ModelParams& p, const GateCache& cache,
                   const VectorXd& gp, GradBuffer& g, VectorXd& gh_item,
                   VectorXd& gh_set);

// Full preference tower; returns p^(S).
VectorXd preference_forward(const std::vector<data::TemporalSet>& previous,
                            const ModelParams& p, PrefCache& cache);
void preference_backward(const ModelParams& p, const PrefCache& cache,
                         const VectorXd& gp_s, GradBuffer& g);

double preference_score(const VectorXd& p_s, int item, const ModelParams& p);

// Full co-occurrence tower; returns C^(S), d x |V|.
MatrixXd co_occurrence_reps(const std::vector<data::TemporalSet>& previous,
                            const ModelParams& p, CoCache& cache);
void co_occurrence_backward(const ModelParams& p, const CoCache& cache,
                            const MatrixXd& gc_s, GradBuffer& g);

inline double cohesion_score(const VectorXd& c_a, const VectorXd& c_b) {
  return c_a.dot(c_b);
}

}  // namespace snsrec::rep

#endif
