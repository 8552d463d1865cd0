#include "snsrec/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "snsrec/evaluate.hpp"

namespace snsrec::train {

void adam_step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad,
               AdamState& state, const TrainConfig& cfg) {
  if (theta.size() != grad.size() || theta.size() != state.m.size())
    throw ShapeMismatchError("adam buffers disagree on size");
  ++state.step;
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
  state.v = cfg.beta2 * state.v.array().matrix() +
            (1.0 - cfg.beta2) * grad.array().square().matrix();
  const double bc1 = 1.0 - std::pow(cfg.beta1, state.step);
  const double bc2 = 1.0 - std::pow(cfg.beta2, state.step);
  theta.array() +=
      cfg.lr * (state.m.array() / bc1) /
      ((state.v.array() / bc2).sqrt() + cfg.eps);
}

TrainerState make_trainer(const rep::ModelParams& init) {
  TrainerState s;
  s.params = init;
  s.adam = AdamState::zeros(init.store.size());
  s.best_params = init;
  return s;
}

double run_epoch(TrainerState& state, int epoch,
                 const std::vector<data::TrainingInstance>& instances,
                 const div::DiversityFactor& f, const TrainConfig& cfg) {
  std::vector<size_t> order(instances.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ull + epoch);
  std::shuffle(order.begin(), order.end(), rng);

  double objective_sum = 0.0;
  size_t cursor = 0;
  while (cursor < order.size()) {
    const size_t batch_end =
        std::min(order.size(), cursor + static_cast<size_t>(cfg.batch_size));
    rep::GradBuffer batch_grad(state.params);
    for (size_t i = cursor; i < batch_end; ++i) {
      const auto& inst = instances[order[i]];
      if (cfg.objective == TrainConfig::Objective::kSdpp) {
        rep::GradBuffer g(state.params);
        auto res = obj::loglik_grad(inst, state.params, f, g,
                                    cfg.center_weights);
        objective_sum += res.loglik;
        batch_grad.flat += g.flat;
      } else {
        rep::GradBuffer g(state.params);
        double loss = eval::bce_baseline_loss(inst, state.params, &g);
        objective_sum += -loss;
        batch_grad.flat -= g.flat;  // ascend on -loss
      }
    }
    batch_grad.flat /= double(batch_end - cursor);
    adam_step(state.params.store.flat(), batch_grad.flat, state.adam, cfg);
    cursor = batch_end;
  }
  const double mean = objective_sum / double(instances.size());
  if (!std::isfinite(mean)) throw DivergedError("objective is not finite");
  return mean;
}

void train_loop(TrainerState& state,
                const std::vector<data::TrainingInstance>& instances,
                const div::DiversityFactor& f, const TrainConfig& cfg,
                const ValidationFn& validate) {
  if (instances.empty()) throw EmptyError("no training instances");
  for (int epoch = state.next_epoch; epoch <= cfg.max_epochs; ++epoch) {
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_ll = run_epoch(state, epoch, instances, f, cfg);
    if (validate) {
      auto [recall, ndcg] = validate(state.params);
      stats.val_recall20 = recall;
      stats.val_ndcg20 = ndcg;
    }
    state.history.push_back(stats);
    state.next_epoch = epoch + 1;

    if (stats.val_recall20 > state.best_metric) {
      state.best_metric = stats.val_recall20;
      state.best_params = state.params;
      state.best_epoch = epoch;
      state.since_improve = 0;
    } else {
      ++state.since_improve;
      if (state.since_improve > cfg.patience) break;
    }
  }
}

TrainResult train(const std::vector<data::TrainingInstance>& instances,
                  const rep::ModelParams& init, const div::DiversityFactor& f,
                  const TrainConfig& cfg, const ValidationFn& validate) {
  TrainerState state = make_trainer(init);
  train_loop(state, instances, f, cfg, validate);
  TrainResult result;
  result.params = validate ? state.best_params : state.params;
  result.history = state.history;
  result.best_epoch = state.best_epoch;
  return result;
}

namespace {

void write_vec(std::ofstream& out, const Eigen::VectorXd& v) {
  std::uint64_t n = v.size();
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(n * 8));
}

Eigen::VectorXd read_vec(std::ifstream& in) {
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  Eigen::VectorXd v(n);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * 8));
  return v;
}

constexpr std::uint64_t kTrainerMagic = 0x534e535452414e31ull;

}  // namespace

void save_trainer_state(const TrainerState& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(&kTrainerMagic), 8);
  write_vec(out, state.params.store.flat());
  write_vec(out, state.adam.m);
  write_vec(out, state.adam.v);
  std::int64_t step = state.adam.step, next = state.next_epoch,
               best_epoch = state.best_epoch, since = state.since_improve;
  out.write(reinterpret_cast<const char*>(&step), 8);
  out.write(reinterpret_cast<const char*>(&next), 8);
  out.write(reinterpret_cast<const char*>(&best_epoch), 8);
  out.write(reinterpret_cast<const char*>(&since), 8);
  out.write(reinterpret_cast<const char*>(&state.best_metric), 8);
  write_vec(out, state.best_params.store.flat());
  std::uint64_t n_hist = state.history.size();
  out.write(reinterpret_cast<const char*>(&n_hist), 8);
  for (const auto& h : state.history) {
    std::int64_t ep = h.epoch;
    out.write(reinterpret_cast<const char*>(&ep), 8);
    out.write(reinterpret_cast<const char*>(&h.train_ll), 8);
    out.write(reinterpret_cast<const char*>(&h.val_recall20), 8);
    out.write(reinterpret_cast<const char*>(&h.val_ndcg20), 8);
  }
}

TrainerState load_trainer_state(const std::string& path,
                                const rep::ModelParams& shape_like) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::uint64_t magic = 0;
  in.read(reinterpret_cast<char*>(&magic), 8);
  if (magic != kTrainerMagic) throw MalformedError("not a trainer state blob");

  TrainerState state = make_trainer(shape_like);
  Eigen::VectorXd flat = read_vec(in);
  if (flat.size() != shape_like.store.size())
    throw ShapeMismatchError("trainer state size mismatch");
  state.params.store.flat() = flat;
  state.adam.m = read_vec(in);
  state.adam.v = read_vec(in);
  std::int64_t step, next, best_epoch, since;
  in.read(reinterpret_cast<char*>(&step), 8);
  in.read(reinterpret_cast<char*>(&next), 8);
  in.read(reinterpret_cast<char*>(&best_epoch), 8);
  in.read(reinterpret_cast<char*>(&since), 8);
  in.read(reinterpret_cast<char*>(&state.best_metric), 8);
  state.adam.step = step;
  state.next_epoch = static_cast<int>(next);
  state.best_epoch = static_cast<int>(best_epoch);
  state.since_improve = static_cast<int>(since);
  state.best_params.store.flat() = read_vec(in);
  std::uint64_t n_hist = 0;
  in.read(reinterpret_cast<char*>(&n_hist), 8);
  for (std::uint64_t i = 0; i < n_hist; ++i) {
    EpochStats h;
    std::int64_t ep;
    in.read(reinterpret_cast<char*>(&ep), 8);
    in.read(reinterpret_cast<char*>(&h.train_ll), 8);
    in.read(reinterpret_cast<char*>(&h.val_recall20), 8);
    in.read(reinterpret_cast<char*>(&h.val_ndcg20), 8);
    h.epoch = static_cast<int>(ep);
    state.history.push_back(h);
  }
  if (!in) throw MalformedError("truncated trainer state blob");
  return state;
}

}  // namespace snsrec::train
