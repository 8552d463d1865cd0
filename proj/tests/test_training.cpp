#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "snsrec/training.hpp"

using namespace snsrec;
using namespace snsrec::train;
using Eigen::VectorXd;

namespace {

rep::ModelParams small_params(std::uint64_t seed = 1, int vocab = 10) {
  rep::ModelDims dims;
  dims.d = 4;
  dims.heads = 2;
  dims.n_queries = 2;
  dims.vocab = vocab;
  dims.max_pos = 8;
  return rep::ModelParams::init(dims, seed);
}

div::DiversityFactor random_factor(int n, int k, std::uint64_t seed) {
  div::DiversityFactor f;
  f.k = k;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(double(k)));
  f.a.resize(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) f.a(i, j) = dist(rng);
  return f;
}

std::vector<data::TrainingInstance> small_batch(int count) {
  std::vector<data::TrainingInstance> out;
  std::mt19937_64 rng(5);
  for (int c = 0; c < count; ++c) {
    std::vector<int> perm(10);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    data::TrainingInstance inst;
    inst.previous = {{{perm[0], perm[1]}, 0}, {{perm[2], perm[3]}, 1}};
    inst.targets = {{{perm[4], perm[5]}, 2}};
    inst.negatives = {{{perm[6], perm[7]}, 2}};
    for (auto& s : inst.previous) std::sort(s.items.begin(), s.items.end());
    for (auto& s : inst.targets) std::sort(s.items.begin(), s.items.end());
    for (auto& s : inst.negatives) std::sort(s.items.begin(), s.items.end());
    out.push_back(inst);
  }
  return out;
}

}  // namespace

TEST_CASE("adam with a zero gradient leaves parameters unchanged") {
  VectorXd theta = VectorXd::Constant(5, 1.5);
  AdamState st = AdamState::zeros(5);
  adam_step(theta, VectorXd::Zero(5), st, {});
  CHECK((theta.array() == 1.5).all());
  CHECK(st.step == 1);
}

TEST_CASE("first adam step moves by about lr in the gradient direction") {
  TrainConfig cfg;
  cfg.lr = 1e-3;
  VectorXd theta = VectorXd::Zero(4);
  VectorXd grad(4);
  grad << 10.0, -0.5, 2.0, -7.0;
  AdamState st = AdamState::zeros(4);
  adam_step(theta, grad, st, cfg);
  // bias-corrected first step: lr * g / (|g| + eps) = lr * sign(g)
  for (int i = 0; i < 4; ++i)
    CHECK(theta(i) ==
          doctest::Approx(cfg.lr * (grad(i) > 0 ? 1.0 : -1.0)).epsilon(1e-6));
}

TEST_CASE("adam rejects mismatched buffer sizes") {
  VectorXd theta = VectorXd::Zero(4);
  AdamState st = AdamState::zeros(5);
  CHECK_THROWS_AS(adam_step(theta, VectorXd::Zero(4), st, {}),
                  ShapeMismatchError);
}

TEST_CASE("an epoch is deterministic given the seed") {
  auto instances = small_batch(6);
  auto f = random_factor(10, 3, 2);
  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.seed = 9;

  TrainerState s1 = make_trainer(small_params(4));
  TrainerState s2 = make_trainer(small_params(4));
  const double ll1 = run_epoch(s1, 1, instances, f, cfg);
  const double ll2 = run_epoch(s2, 1, instances, f, cfg);
  CHECK(ll1 == ll2);
  CHECK((s1.params.store.flat() - s2.params.store.flat()).cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("training improves the mean objective on a tiny problem") {
  auto instances = small_batch(8);
  auto f = random_factor(10, 3, 3);
  TrainConfig cfg;
  cfg.lr = 5e-3;
  cfg.batch_size = 4;
  cfg.max_epochs = 15;
  TrainerState state = make_trainer(small_params(5));
  const double first = run_epoch(state, 1, instances, f, cfg);
  double last = first;
  for (int e = 2; e <= cfg.max_epochs; ++e)
    last = run_epoch(state, e, instances, f, cfg);
  CHECK(last > first);
}

TEST_CASE("patience zero stops after the first non-improvement") {
  auto instances = small_batch(4);
  auto f = random_factor(10, 3, 4);
  TrainConfig cfg;
  cfg.max_epochs = 50;
  cfg.patience = 0;
  // validation metric decreases every epoch: epoch 1 is best, epoch 2 is
  // the first non-improvement, so exactly 2 epochs run
  int calls = 0;
  auto validate = [&](const rep::ModelParams&) {
    ++calls;
    return std::make_pair(1.0 / calls, 0.0);
  };
  auto result = train::train(instances, small_params(6), f, cfg, validate);
  CHECK(result.history.size() == 2);
  CHECK(result.best_epoch == 1);
}

TEST_CASE("early stopping returns the best-validation parameters") {
  auto instances = small_batch(4);
  auto f = random_factor(10, 3, 5);
  TrainConfig cfg;
  cfg.max_epochs = 6;
  cfg.patience = 10;  // never triggers; run all epochs
  std::vector<double> metric = {0.1, 0.5, 0.3, 0.2, 0.1, 0.1};
  int calls = 0;
  VectorXd snapshot;
  TrainerState probe = make_trainer(small_params(7));
  auto validate = [&](const rep::ModelParams& p) {
    const double m = metric[calls++];
    if (m == 0.5) snapshot = p.store.flat();
    return std::make_pair(m, 0.0);
  };
  auto result = train::train(instances, small_params(7), f, cfg, validate);
  CHECK(result.best_epoch == 2);
  CHECK((result.params.store.flat() - snapshot).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the diversity factor is never modified by training") {
  auto instances = small_batch(4);
  auto f = random_factor(10, 3, 6);
  const Eigen::MatrixXd before = f.a;
  TrainConfig cfg;
  cfg.max_epochs = 3;
  train::train(instances, small_params(8), f, cfg, nullptr);
  CHECK((f.a - before).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("training on an empty instance list is rejected") {
  auto f = random_factor(10, 3, 7);
  CHECK_THROWS_AS(train::train({}, small_params(9), f, {}, nullptr), EmptyError);
}

TEST_CASE("a restored trainer reproduces the original trajectory") {
  auto instances = small_batch(6);
  auto f = random_factor(10, 3, 8);
  TrainConfig cfg;
  cfg.batch_size = 3;
  cfg.seed = 13;
  cfg.max_epochs = 6;
  cfg.patience = 100;

  // uninterrupted run
  TrainerState full = make_trainer(small_params(10));
  train_loop(full, instances, f, cfg, nullptr);

  // interrupted after 3 epochs, saved, reloaded, resumed
  TrainerState half = make_trainer(small_params(10));
  TrainConfig first_half = cfg;
  first_half.max_epochs = 3;
  train_loop(half, instances, f, first_half, nullptr);
  std::string path = std::string(std::tmpnam(nullptr)) + ".bin";
  save_trainer_state(half, path);
  TrainerState resumed = load_trainer_state(path, small_params(10));
  std::remove(path.c_str());
  CHECK(resumed.next_epoch == 4);
  train_loop(resumed, instances, f, cfg, nullptr);

  CHECK(resumed.history.size() == full.history.size());
  for (size_t i = 0; i < full.history.size(); ++i)
    CHECK(resumed.history[i].train_ll == full.history[i].train_ll);
  CHECK((resumed.params.store.flat() - full.params.store.flat()).cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("trainer state loading validates magic and shape") {
  std::string path = std::string(std::tmpnam(nullptr)) + ".bin";
  {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    std::fputs("garbage", fp);
    std::fclose(fp);
  }
  CHECK_THROWS_AS(load_trainer_state(path, small_params(11)), MalformedError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_trainer_state("/nonexistent/state.bin",
                                     small_params(11)),
                  IoError);

  TrainerState state = make_trainer(small_params(11));
  save_trainer_state(state, path);
  rep::ModelDims other;
  other.d = 4;
  other.heads = 2;
  other.n_queries = 2;
  other.vocab = 3;  // different vocab, different flat size
  other.max_pos = 8;
  CHECK_THROWS_AS(load_trainer_state(path, rep::ModelParams::init(other, 0)),
                  ShapeMismatchError);
  std::remove(path.c_str());
}

TEST_CASE("a single instance can be overfit to near-certainty") {
  auto instances = small_batch(1);
  auto f = random_factor(10, 3, 9);
  TrainConfig cfg;
  cfg.lr = 1e-2;
  cfg.batch_size = 1;
  TrainerState state = make_trainer(small_params(12));
  double ll = -1e9;
  for (int e = 1; e <= 2000 && std::exp(ll) <= 0.9; ++e)
    ll = run_epoch(state, e, instances, f, cfg);
  CHECK(std::exp(ll) > 0.9);
}

TEST_CASE("the BCE objective also trains without diverging") {
  auto instances = small_batch(6);
  auto f = random_factor(10, 3, 10);
  TrainConfig cfg;
  cfg.objective = TrainConfig::Objective::kBce;
  cfg.lr = 5e-3;
  cfg.batch_size = 3;
  TrainerState state = make_trainer(small_params(13));
  const double first = run_epoch(state, 1, instances, f, cfg);
  double last = first;
  for (int e = 2; e <= 10; ++e) last = run_epoch(state, e, instances, f, cfg);
  CHECK(std::isfinite(last));
  CHECK(last > first);  // mean of -loss rises as loss falls
}
