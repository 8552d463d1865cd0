#ifndef SNSREC_TRAINING_HPP
#define SNSREC_TRAINING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "snsrec/objective.hpp"

namespace snsrec::train {

struct TrainConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int batch_size = 32;
  int max_epochs = 50;
  int patience = 5;
  std::uint64_t seed = 0;
  int a = 3, b = 1, z = 1;  // instance sizes
  double lambda = 0.2;      // prediction blend
  bool center_weights = true;
  enum class Objective { kSdpp, kBce } objective = Objective::kSdpp;
};

struct AdamState {
  Eigen::VectorXd m, v;
  long step = 0;

  static AdamState zeros(Eigen::Index size) {
    return {Eigen::VectorXd::Zero(size), Eigen::VectorXd::Zero(size), 0};
  }
};

// Bias-corrected Adam ascent step (maximization): theta += lr * m^ / (sqrt(v^)+eps).
void adam_step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad,
               AdamState& state, const TrainConfig& cfg);

struct EpochStats {
  int epoch = 0;
  double train_ll = 0.0;   // mean per-instance objective
  double val_recall20 = 0.0;
  double val_ndcg20 = 0.0;
};

struct TrainResult {
  rep::ModelParams params;  // best-validation checkpoint
  std::vector<EpochStats> history;
  int best_epoch = 0;
};

// Per-epoch validation metric (Recall@20 / NDCG@20), supplied by the
// caller so training stays decoupled from dataset plumbing.
using ValidationFn = std::function<std::pair<double, double>(
    const rep::ModelParams&)>;

struct TrainerState {
  rep::ModelParams params;
  AdamState adam;
  int next_epoch = 1;
  std::vector<EpochStats> history;
  rep::ModelParams best_params;
  double best_metric = -1.0;
  int best_epoch = 0;
  int since_improve = 0;
};

TrainerState make_trainer(const rep::ModelParams& init);

// Runs one epoch: seeded shuffle, mean-gradient minibatches, Adam ascent.
// Returns the epoch's mean objective. Throws DivergedError on NaN.
double run_epoch(TrainerState& state, int epoch,
                 const std::vector<data::TrainingInstance>& instances,
                 const div::DiversityFactor& f, const TrainConfig& cfg);

// Full loop with early stopping on validation Recall@20.
TrainResult train(const std::vector<data::TrainingInstance>& instances,
                  const rep::ModelParams& init, const div::DiversityFactor& f,
                  const TrainConfig& cfg, const ValidationFn& validate);

// Resumable variant: steps `state` forward until stopping, so a run
// restored from a saved TrainerState reproduces the original trajectory.
void train_loop(TrainerState& state,
                const std::vector<data::TrainingInstance>& instances,
                const div::DiversityFactor& f, const TrainConfig& cfg,
                const ValidationFn& validate);

void save_trainer_state(const TrainerState& state, const std::string& path);
TrainerState load_trainer_state(const std::string& path,
                                const rep::ModelParams& shape_like);

}  // namespace snsrec::train

#endif
