#include "snsrec/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace snsrec::pipe {

Dataset dataset_from_events(const std::vector<data::Interaction>& events,
                            const data::SessionizeConfig& cfg) {
  Dataset ds;
  for (const auto& ev : events) {
    ds.n_items = std::max(ds.n_items, ev.item + 1);
    ds.n_categories = std::max(ds.n_categories, ev.category + 1);
  }
  ds.categories.assign(ds.n_items, 0);
  for (const auto& ev : events) ds.categories[ev.item] = ev.category;
  ds.sequences = data::sessionize(events, cfg);
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  nlohmann::json j;
  j["n_items"] = ds.n_items;
  j["n_categories"] = ds.n_categories;
  j["categories"] = ds.categories;
  nlohmann::json seqs = nlohmann::json::array();
  for (const auto& seq : ds.sequences) {
    nlohmann::json sets = nlohmann::json::array();
    for (const auto& s : seq.sets)
      sets.push_back({{"day", s.day}, {"items", s.items}});
    seqs.push_back({{"user", seq.user}, {"sets", sets}});
  }
  j["sequences"] = seqs;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump() << '\n';
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  Dataset ds;
  ds.n_items = j["n_items"];
  ds.n_categories = j["n_categories"];
  ds.categories = j["categories"].get<data::CategoryMap>();
  for (const auto& seq : j["sequences"]) {
    data::SetSequence s;
    s.user = seq["user"];
    for (const auto& set : seq["sets"]) {
      data::TemporalSet ts;
      ts.day = set["day"];
      ts.items = set["items"].get<std::vector<int>>();
      s.sets.push_back(std::move(ts));
    }
    ds.sequences.push_back(std::move(s));
  }
  return ds;
}

void save_index_maps(const std::map<int, int>& items,
                     const std::map<int, int>& categories,
                     const std::string& path) {
  nlohmann::json j;
  for (const auto& [raw, dense] : items)
    j["items"][std::to_string(raw)] = dense;
  for (const auto& [raw, dense] : categories)
    j["categories"][std::to_string(raw)] = dense;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::vector<data::TrainingInstance> build_all_instances(
    const std::vector<data::SetSequence>& train, int a, int b, int z,
    int n_items, std::uint64_t seed) {
  std::vector<data::TrainingInstance> all;
  for (const auto& seq : train) {
    auto insts = data::build_instances(seq, a, b, z, n_items, seed);
    all.insert(all.end(), std::make_move_iterator(insts.begin()),
               std::make_move_iterator(insts.end()));
  }
  return all;
}

namespace {

std::vector<data::TemporalSet> history_tail(
    const std::vector<data::TemporalSet>& sets, int a) {
  const int take = std::min<int>(a, static_cast<int>(sets.size()));
  return {sets.end() - take, sets.end()};
}

}  // namespace

train::ValidationFn make_validator(const Dataset& ds,
                                   const data::SplitView& view, double lambda,
                                   int a) {
  return [&ds, &view, lambda, a](const rep::ModelParams& params) {
    double recall_sum = 0.0, ndcg_sum = 0.0;
    long users = 0;
    for (size_t u = 0; u < view.train.size(); ++u) {
      if (view.train[u].sets.empty()) continue;
      auto scores = eval::predict_scores(history_tail(view.train[u].sets, a),
                                         params, lambda);
      auto rank = eval::rank_items(scores);
      const int n = std::min<int>(20, static_cast<int>(rank.items.size()));
      auto row = eval::evaluate_topn(rank, view.val[u], ds.categories,
                                     ds.n_categories, n);
      recall_sum += row.recall;
      ndcg_sum += row.ndcg;
      ++users;
    }
    if (users == 0) return std::make_pair(0.0, 0.0);
    return std::make_pair(recall_sum / users, ndcg_sum / users);
  };
}

EvalSummary evaluate_model(const Dataset& ds, const data::SplitView& view,
                           const rep::ModelParams& params, double lambda,
                           const std::vector<int>& ns, bool on_test, int a,
                           const eval::EvalOptions& opts) {
  EvalSummary summary;
  for (int n : ns) summary.macro[n] = {};
  for (size_t u = 0; u < view.train.size(); ++u) {
    std::vector<data::TemporalSet> history = view.train[u].sets;
    if (on_test) history.push_back(view.val[u]);
    if (history.empty()) continue;
    auto scores =
        eval::predict_scores(history_tail(history, a), params, lambda);
    auto rank = eval::rank_items(scores);
    const auto& target = on_test ? view.test[u] : view.val[u];
    for (int n : ns) {
      const int eff = std::min<int>(n, static_cast<int>(rank.items.size()));
      auto row = eval::evaluate_topn(rank, target, ds.categories,
                                     ds.n_categories, eff, opts);
      auto& acc = summary.macro[n];
      acc.recall += row.recall;
      acc.ndcg += row.ndcg;
      acc.cc += row.cc;
      acc.ild += row.ild;
      acc.f1 += row.f1;
    }
    ++summary.n_users;
  }
  if (summary.n_users > 0)
    for (auto& [n, row] : summary.macro) {
      row.recall /= summary.n_users;
      row.ndcg /= summary.n_users;
      row.cc /= summary.n_users;
      row.ild /= summary.n_users;
      row.f1 /= summary.n_users;
    }
  return summary;
}

void write_metrics_csv(const EvalSummary& summary, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  out << "n,recall,ndcg,cc,ild,f1\n";
  for (const auto& [n, row] : summary.macro)
    out << n << ',' << row.recall << ',' << row.ndcg << ',' << row.cc << ','
        << row.ild << ',' << row.f1 << '\n';
}

div::DiversePairBatch diverse_batch_from(const Dataset& ds,
                                         const data::SplitView& view,
                                         const div::ExtractConfig& cfg,
                                         std::uint64_t seed) {
  std::vector<data::TemporalSet> sets;
  for (const auto& seq : view.train)
    sets.insert(sets.end(), seq.sets.begin(), seq.sets.end());
  return div::extract_diverse_subsets(sets, ds.categories, ds.n_items, cfg,
                                      seed);
}

data::SynthSpec default_synth_spec(double rho) {
  data::SynthSpec spec;
  spec.n_users = 60;
  spec.n_items = 50;
  spec.n_categories = 5;
  spec.n_days = 40;
  spec.active_prob = 0.8;
  spec.min_set_items = 4;
  spec.max_set_items = 7;
  spec.favored_prob = 0.6;
  spec.rho = rho;
  // cross-category planted pairs (categories are 10-item blocks)
  spec.planted_pairs = {{2, 12}, {5, 25}, {13, 33}, {21, 41}, {7, 47},
                        {15, 35}, {28, 48}, {3, 43}};
  return spec;
}

data::SynthSpec paired_synth_spec(double rho) {
  data::SynthSpec spec;
  spec.n_users = 60;
  spec.n_items = 50;
  spec.n_categories = 5;
  spec.n_days = 40;
  spec.active_prob = 0.8;
  spec.min_set_items = 4;
  spec.max_set_items = 8;
  spec.fill_to_size = true;
  spec.favored_prob = 0.75;
  spec.pop_alpha = 2.0;
  spec.rho = rho;
  // every item gets a planted partner in another category, so the globally
  // popular items drag cross-category partners into the same sets
  spec.planted_pairs = data::cross_category_matching(spec, 7);
  return spec;
}

}  // namespace snsrec::pipe
