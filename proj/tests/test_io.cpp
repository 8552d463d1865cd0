#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "snsrec/checkpoint.hpp"
#include "snsrec/config.hpp"
#include "snsrec/pipeline.hpp"

using namespace snsrec;

namespace {

struct TempPath {
  std::string path;
  explicit TempPath(const char* ext) {
    path = std::string(std::tmpnam(nullptr)) + ext;
  }
  ~TempPath() { std::remove(path.c_str()); }
};

rep::ModelParams small_params(std::uint64_t seed = 1) {
  rep::ModelDims dims;
  dims.d = 4;
  dims.heads = 2;
  dims.n_queries = 2;
  dims.vocab = 5;
  dims.max_pos = 8;
  return rep::ModelParams::init(dims, seed);
}

}  // namespace

TEST_CASE("checkpoint round-trips parameters bit-exactly") {
  rep::ModelParams params = small_params(42);
  TempPath blob(".bin"), manifest(".json");
  rep::save_checkpoint(params, blob.path, manifest.path);
  rep::ModelParams loaded = rep::load_checkpoint(blob.path, manifest.path);
  CHECK(loaded.dims.d == params.dims.d);
  CHECK(loaded.dims.vocab == params.dims.vocab);
  CHECK(loaded.store.size() == params.store.size());
  CHECK((loaded.store.flat() - params.store.flat()).cwiseAbs().maxCoeff() ==
        0.0);
  // named views land in the same places
  CHECK((loaded.t("gate.w") - params.t("gate.w")).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("checkpoint loading validates the manifest") {
  rep::ModelParams params = small_params(43);
  TempPath blob(".bin"), manifest(".json");
  rep::save_checkpoint(params, blob.path, manifest.path);
  {
    std::ofstream out(manifest.path);
    out << "{\"not\": \"a manifest\"}";
  }
  CHECK_THROWS(rep::load_checkpoint(blob.path, manifest.path));
  CHECK_THROWS_AS(
      rep::load_checkpoint("/nonexistent/a.bin", "/nonexistent/a.json"),
      IoError);
}

TEST_CASE("kv config parses sections, comments, and types") {
  TempPath path(".ini");
  {
    std::ofstream out(path.path);
    out << "# top comment\n"
        << "seed = 7\n"
        << "\n"
        << "[train]\n"
        << "lr = 0.001\n"
        << "center = true\n"
        << "name = run a\n";
  }
  auto cfg = cfg::KvConfig::from_file(path.path);
  CHECK(cfg.get_long("seed", 0) == 7);
  CHECK(cfg.get_double("train.lr", 0.0) == doctest::Approx(1e-3));
  CHECK(cfg.get_bool("train.center", false) == true);
  CHECK(cfg.get_str("train.name", "") == "run a");
  CHECK(cfg.get_str("missing", "fallback") == "fallback");
}

TEST_CASE("kv config round-trips through write and reload") {
  cfg::KvConfig cfg;
  cfg.set("seed", "11");
  cfg.set("train.lr", "0.01");
  cfg.set("train.patience", "5");
  cfg.set("eval.lambda", "0.2");
  TempPath path(".ini");
  cfg.write(path.path);
  auto reloaded = cfg::KvConfig::from_file(path.path);
  CHECK(reloaded.values() == cfg.values());
}

TEST_CASE("kv config rejects malformed lines and missing files") {
  TempPath path(".ini");
  {
    std::ofstream out(path.path);
    out << "this line has no equals sign\n";
  }
  CHECK_THROWS_AS(cfg::KvConfig::from_file(path.path), MalformedError);
  CHECK_THROWS_AS(cfg::KvConfig::from_file("/nonexistent.ini"), IoError);
}

TEST_CASE("dataset JSON round-trips sequences and categories") {
  auto spec = pipe::default_synth_spec(0.5);
  spec.n_users = 10;
  spec.n_days = 12;
  auto events = data::gen_synthetic(spec, 3);
  auto ds = pipe::dataset_from_events(events, {});
  REQUIRE(!ds.sequences.empty());

  TempPath path(".json");
  pipe::save_dataset(ds, path.path);
  auto loaded = pipe::load_dataset(path.path);
  CHECK(loaded.n_items == ds.n_items);
  CHECK(loaded.n_categories == ds.n_categories);
  CHECK(loaded.categories == ds.categories);
  REQUIRE(loaded.sequences.size() == ds.sequences.size());
  for (size_t u = 0; u < ds.sequences.size(); ++u) {
    CHECK(loaded.sequences[u].user == ds.sequences[u].user);
    REQUIRE(loaded.sequences[u].sets.size() == ds.sequences[u].sets.size());
    for (size_t s = 0; s < ds.sequences[u].sets.size(); ++s) {
      CHECK(loaded.sequences[u].sets[s].items ==
            ds.sequences[u].sets[s].items);
      CHECK(loaded.sequences[u].sets[s].day == ds.sequences[u].sets[s].day);
    }
  }
}

TEST_CASE("index maps serialize raw-to-dense id pairs") {
  std::map<int, int> items = {{100, 0}, {205, 1}, {7, 2}};
  std::map<int, int> cats = {{9, 0}, {4, 1}};
  TempPath path(".json");
  pipe::save_index_maps(items, cats, path.path);
  std::ifstream in(path.path);
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(body.find("\"100\"") != std::string::npos);
  CHECK(body.find("\"205\"") != std::string::npos);
  CHECK(body.find("items") != std::string::npos);
  CHECK(body.find("categories") != std::string::npos);
}

TEST_CASE("metrics CSV is deterministic for identical summaries") {
  pipe::EvalSummary summary;
  summary.n_users = 3;
  summary.macro[10] = {0.5, 0.25, 0.4, 0.6, 0.45};
  summary.macro[20] = {0.7, 0.35, 0.5, 0.55, 0.5};
  TempPath p1(".csv"), p2(".csv");
  pipe::write_metrics_csv(summary, p1.path);
  pipe::write_metrics_csv(summary, p2.path);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  };
  const std::string a = slurp(p1.path);
  CHECK(a == slurp(p2.path));
  CHECK(a.rfind("n,recall,ndcg,cc,ild,f1\n", 0) == 0);
  CHECK(a.find("10,") != std::string::npos);
  CHECK(a.find("20,") != std::string::npos);
}

TEST_CASE("trained-model persistence survives a predict round trip") {
  rep::ModelParams params = small_params(77);
  std::vector<data::TemporalSet> prefix = {{{0, 1}, 0}, {{2, 3}, 1}};
  Eigen::VectorXd before = eval::predict_scores(prefix, params, 0.2);

  TempPath blob(".bin"), manifest(".json");
  rep::save_checkpoint(params, blob.path, manifest.path);
  rep::ModelParams loaded = rep::load_checkpoint(blob.path, manifest.path);
  Eigen::VectorXd after = eval::predict_scores(prefix, loaded, 0.2);
  CHECK((before - after).cwiseAbs().maxCoeff() == 0.0);
}
