#ifndef SNSREC_PIPELINE_HPP
#define SNSREC_PIPELINE_HPP

#include <map>
#include <string>
#include <vector>

#include "snsrec/data.hpp"
#include "snsrec/diversity.hpp"
#include "snsrec/evaluate.hpp"
#include "snsrec/synth.hpp"
#include "snsrec/training.hpp"

namespace snsrec::pipe {

// Sessionized corpus with dense ids and item categories, persisted as a
// run-directory artifact.
struct Dataset {
  int n_items = 0;
  int n_categories = 0;
  data::CategoryMap categories;  // dense item id -> dense category id
  std::vector<data::SetSequence> sequences;
};

Dataset dataset_from_events(const std::vector<data::Interaction>& events,
                            const data::SessionizeConfig& cfg);

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

// Raw-id -> dense-id maps as JSON (items + categories).
void save_index_maps(const std::map<int, int>& items,
                     const std::map<int, int>& categories,
                     const std::string& path);

std::vector<data::TrainingInstance> build_all_instances(
    const std::vector<data::SetSequence>& train, int a, int b, int z,
    int n_items, std::uint64_t seed);

// Recall@20 / NDCG@20 on the validation targets, using the last `a` sets
// of each user's training prefix as prediction history.
train::ValidationFn make_validator(const Dataset& ds,
                                   const data::SplitView& view, double lambda,
                                   int a);

struct EvalSummary {
  std::map<int, eval::MetricsRow> macro;  // per top-N
  long n_users = 0;
};

// Evaluates on test targets (history = prefix + validation set) or on
// validation targets (history = prefix only).
EvalSummary evaluate_model(const Dataset& ds, const data::SplitView& view,
                           const rep::ModelParams& params, double lambda,
                           const std::vector<int>& ns, bool on_test, int a,
                           const eval::EvalOptions& opts = {});

void write_metrics_csv(const EvalSummary& summary, const std::string& path);

// Diverse-subset extraction over all training-prefix sets.
div::DiversePairBatch diverse_batch_from(const Dataset& ds,
                                         const data::SplitView& view,
                                         const div::ExtractConfig& cfg,
                                         std::uint64_t seed);

// Synthetic corpus spec used across the acceptance checks: 5 categories,
// 50 items, cross-category planted pairs at the given rho.
data::SynthSpec default_synth_spec(double rho);

// Harder variant for objective comparisons: steep within-category popularity
// (per-user Zipf order) plus a planted cross-category partner for every item,
// so the most frequent sets span categories.
data::SynthSpec paired_synth_spec(double rho);

}  // namespace snsrec::pipe

#endif
