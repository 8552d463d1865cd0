#include <benchmark/benchmark.h>

#include <random>

#include "snsrec/linalg.hpp"
#include "snsrec/objective.hpp"
#include "snsrec/pipeline.hpp"

using namespace snsrec;

namespace {

Eigen::MatrixXd random_psd(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd b(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) b(i, j) = dist(rng);
  Eigen::MatrixXd m = b * b.transpose() / dim;
  m.diagonal().array() += 0.4;
  return m;
}

void bm_logdet(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Eigen::MatrixXd m = random_psd(dim, 11);
  for (auto _ : state) benchmark::DoNotOptimize(la::logdet_psd(m));
}
BENCHMARK(bm_logdet)->Arg(5)->Arg(20)->Arg(100);

void bm_enumeration_oracle(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Eigen::MatrixXd m = random_psd(dim, 13);
  la::IndexSet a = {0, 1};
  for (auto _ : state)
    benchmark::DoNotOptimize(la::enumerate_conditional_oracle(m, a));
}
BENCHMARK(bm_enumeration_oracle)->Arg(8)->Arg(12)->Arg(16);

struct PipelineFixture {
  pipe::Dataset ds;
  data::SplitView view;
  div::DiversityFactor factor;
  std::vector<data::TrainingInstance> instances;
  rep::ModelParams params;

  PipelineFixture() {
    auto events = data::gen_synthetic(pipe::paired_synth_spec(0.9), 1);
    ds = pipe::dataset_from_events(events, {});
    view = data::split(ds.sequences);
    auto batch = pipe::diverse_batch_from(ds, view, {}, 1);
    div::DiverseLearnConfig dcfg;
    dcfg.epochs = 5;
    dcfg.seed = 1;
    factor = div::learn_diverse_kernel(batch, ds.n_items, 32, dcfg).factor;
    instances = pipe::build_all_instances(view.train, 3, 1, 3, ds.n_items, 1);
    rep::ModelDims dims;
    dims.d = 16;
    dims.heads = 4;
    dims.n_queries = 4;
    dims.vocab = ds.n_items;
    dims.max_pos = 64;
    params = rep::ModelParams::init(dims, 1);
  }
};

PipelineFixture& fixture() {
  static PipelineFixture f;
  return f;
}

void bm_kernel_assembly(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        obj::assemble_kernel(f.instances[0], f.params, f.factor, true));
}
BENCHMARK(bm_kernel_assembly);

void bm_instance_loglik(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        obj::instance_loglik(f.instances[0], f.params, f.factor));
}
BENCHMARK(bm_instance_loglik);

void bm_loglik_grad(benchmark::State& state) {
  auto& f = fixture();
  rep::GradBuffer g(f.params);
  for (auto _ : state) {
    g.flat.setZero();
    benchmark::DoNotOptimize(
        obj::loglik_grad(f.instances[0], f.params, f.factor, g));
  }
}
BENCHMARK(bm_loglik_grad);

void bm_predict_scores(benchmark::State& state) {
  auto& f = fixture();
  const auto& prefix = f.instances[0].previous;
  for (auto _ : state)
    benchmark::DoNotOptimize(eval::predict_scores(prefix, f.params, 0.2));
}
BENCHMARK(bm_predict_scores);

}  // namespace

BENCHMARK_MAIN();
