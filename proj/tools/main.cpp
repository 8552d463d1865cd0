// Command-line front end: ingest / synth / learn-div / train / eval.
//
// Every command resolves its configuration from defaults, an optional
// key=value config file, and command-line flags (flags win), then writes the
// resolved configuration next to its outputs so a run can be reproduced from
// the artifact directory alone.
//
// Exit codes: 0 success, 2 user/input error, 3 data insufficiency,
// 4 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "snsrec/checkpoint.hpp"
#include "snsrec/config.hpp"
#include "snsrec/objective.hpp"
#include "snsrec/pipeline.hpp"

using namespace snsrec;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUser = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Merges defaults, config-file values, and CLI flags into one resolved view.
// A flag given on the command line wins; otherwise the file value (if any)
// replaces the built-in default.
struct ConfigMerge {
  cfg::KvConfig file;
  cfg::KvConfig resolved;

  void merge(const CLI::Option* opt, const std::string& key, double& v) {
    if (opt->count() == 0) v = file.get_double(key, v);
    resolved.set(key, fmt_double(v));
  }
  void merge(const CLI::Option* opt, const std::string& key, int& v) {
    if (opt->count() == 0) v = static_cast<int>(file.get_long(key, v));
    resolved.set(key, std::to_string(v));
  }
  void merge(const CLI::Option* opt, const std::string& key,
             std::uint64_t& v) {
    if (opt->count() == 0)
      v = static_cast<std::uint64_t>(file.get_long(key, static_cast<long>(v)));
    resolved.set(key, std::to_string(v));
  }
  void merge(const CLI::Option* opt, const std::string& key, bool& v) {
    if (opt->count() == 0) v = file.get_bool(key, v);
    resolved.set(key, v ? "true" : "false");
  }
  void merge(const CLI::Option* opt, const std::string& key, std::string& v) {
    if (opt->count() == 0) v = file.get_str(key, v);
    resolved.set(key, v);
  }
};

ConfigMerge load_merge(const std::string& config_path) {
  ConfigMerge m;
  if (!config_path.empty()) m.file = cfg::KvConfig::from_file(config_path);
  return m;
}

void finish_run_dir(const ConfigMerge& m, const std::string& out_dir) {
  fs::create_directories(out_dir);
  m.resolved.write(out_dir + "/run_config.ini");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || v < 1)
      throw InvalidSpecError("bad top-N list entry '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidSpecError("empty top-N list");
  return out;
}

std::vector<double> parse_sweep(const std::string& text) {
  double lo = 0, hi = 0, step = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
      step <= 0 || hi < lo)
    throw InvalidSpecError("sweep must be lo:hi:step with step > 0, got '" +
                           text + "'");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = lo + i * step;
    if (v > hi + 1e-12) break;
    out.push_back(std::min(v, hi));
  }
  return out;
}

void print_dataset_summary(const pipe::Dataset& ds, long dropped) {
  long n_sets = 0, n_events = 0;
  for (const auto& seq : ds.sequences) {
    n_sets += static_cast<long>(seq.sets.size());
    for (const auto& s : seq.sets) n_events += static_cast<long>(s.items.size());
  }
  std::cout << "users " << ds.sequences.size() << "\n"
            << "items " << ds.n_items << "\n"
            << "categories " << ds.n_categories << "\n"
            << "sets " << n_sets << "\n"
            << "interactions " << n_events << "\n";
  if (dropped > 0) std::cout << "dropped_rows " << dropped << "\n";
}

// --- ingest ------------------------------------------------------------------

int cmd_ingest(const std::string& config_path, const CLI::App& cmd,
               std::string input, std::string out_dir, int min_sets,
               int max_set_size) {
  ConfigMerge m = load_merge(config_path);
  m.merge(cmd.get_option("--input"), "ingest.input", input);
  m.merge(cmd.get_option("--out"), "ingest.out", out_dir);
  m.merge(cmd.get_option("--min-sets"), "ingest.min_sets", min_sets);
  m.merge(cmd.get_option("--max-set-size"), "ingest.max_set_size",
          max_set_size);

  auto result = data::ingest_events(input);
  data::SessionizeConfig scfg;
  scfg.min_sets = min_sets;
  scfg.max_set_size = max_set_size;
  auto ds = pipe::dataset_from_events(result.events, scfg);
  if (ds.sequences.empty())
    throw EmptyError("no user kept at least " + std::to_string(min_sets) +
                     " sets after filtering");

  finish_run_dir(m, out_dir);
  pipe::save_dataset(ds, out_dir + "/dataset.json");
  pipe::save_index_maps(result.item_map, result.category_map,
                        out_dir + "/index_maps.json");
  print_dataset_summary(ds, result.dropped);
  return 0;
}

// --- synth -------------------------------------------------------------------

int cmd_synth(const std::string& config_path, const CLI::App& cmd,
              std::string out_dir, double rho, std::uint64_t seed, bool paired,
              bool verify, int n_users, int n_days) {
  ConfigMerge m = load_merge(config_path);
  m.merge(cmd.get_option("--out"), "synth.out", out_dir);
  m.merge(cmd.get_option("--rho"), "synth.rho", rho);
  m.merge(cmd.get_option("--seed"), "synth.seed", seed);
  m.merge(cmd.get_option("--paired"), "synth.paired", paired);
  m.merge(cmd.get_option("--users"), "synth.users", n_users);
  m.merge(cmd.get_option("--days"), "synth.days", n_days);

  auto spec = paired ? pipe::paired_synth_spec(rho) : pipe::default_synth_spec(rho);
  spec.n_users = n_users;
  spec.n_days = n_days;
  auto events = data::gen_synthetic(spec, seed);
  auto ds = pipe::dataset_from_events(events, {});
  if (ds.sequences.empty())
    throw EmptyError("synthetic corpus produced no usable sequences");

  finish_run_dir(m, out_dir);
  pipe::save_dataset(ds, out_dir + "/dataset.json");
  std::map<int, int> identity_items, identity_cats;
  for (int i = 0; i < ds.n_items; ++i) identity_items[i] = i;
  for (int c = 0; c < ds.n_categories; ++c) identity_cats[c] = c;
  pipe::save_index_maps(identity_items, identity_cats,
                        out_dir + "/index_maps.json");
  print_dataset_summary(ds, 0);

  if (verify) {
    // counting check: when a planted pair's member shows up in a day set,
    // its partner must be there at roughly the configured rate
    std::map<std::pair<int, std::int64_t>, std::set<int>> day_sets;
    for (const auto& ev : events)
      day_sets[{ev.user, ev.time / 86400}].insert(ev.item);
    double worst = 1.0;
    for (auto [i, j] : spec.planted_pairs) {
      long hits = 0, both = 0;
      for (const auto& [key, items] : day_sets) {
        if (items.count(i) || items.count(j)) {
          ++hits;
          if (items.count(i) && items.count(j)) ++both;
        }
      }
      const double rate = hits > 0 ? double(both) / double(hits) : 0.0;
      worst = std::min(worst, rate);
    }
    std::cout << "planted_pairs " << spec.planted_pairs.size()
              << " min_cooccurrence " << worst << "\n";
    if (worst + 0.1 < rho)
      throw EmptyError("planted co-occurrence " + fmt_double(worst) +
                       " fell more than 0.1 below rho " + fmt_double(rho));
    std::cout << "verify OK\n";
  }
  return 0;
}

// --- learn-div ---------------------------------------------------------------

int cmd_learn_div(const std::string& config_path, const CLI::App& cmd,
                  std::string data_dir, std::string out_dir, int rank,
                  int epochs, double lr, std::uint64_t seed) {
  ConfigMerge m = load_merge(config_path);
  m.merge(cmd.get_option("--data"), "learn_div.data", data_dir);
  m.merge(cmd.get_option("--out"), "learn_div.out", out_dir);
  m.merge(cmd.get_option("--rank"), "learn_div.rank", rank);
  m.merge(cmd.get_option("--epochs"), "learn_div.epochs", epochs);
  m.merge(cmd.get_option("--lr"), "learn_div.lr", lr);
  m.merge(cmd.get_option("--seed"), "learn_div.seed", seed);

  auto ds = pipe::load_dataset(data_dir + "/dataset.json");
  auto view = data::split(ds.sequences);
  auto batch = pipe::diverse_batch_from(ds, view, {}, seed);
  if (batch.positives.empty())
    throw EmptyError("no diverse subsets found in the training sets");

  div::DiverseLearnConfig cfg;
  cfg.epochs = epochs;
  cfg.lr = lr;
  cfg.seed = seed;
  auto result = div::learn_diverse_kernel(batch, ds.n_items, rank, cfg);

  finish_run_dir(m, out_dir);
  div::save_factor(result.factor, out_dir + "/factor.bin");
  std::cout << "pairs " << batch.positives.size() << "\n"
            << "rank " << result.factor.k << "\n"
            << "final_loglik " << result.loglik_history.back() << "\n";
  return 0;
}

// --- train -------------------------------------------------------------------

int cmd_train(const std::string& config_path, const CLI::App& cmd,
              std::string data_dir, std::string factor_path,
              std::string out_dir, std::string objective, double lambda,
              double lr, int epochs, int patience, int batch_size, int a,
              int b, int z, int d, int heads, int queries, bool grad_check,
              std::uint64_t seed) {
  ConfigMerge m = load_merge(config_path);
  m.merge(cmd.get_option("--data"), "train.data", data_dir);
  m.merge(cmd.get_option("--factor"), "train.factor", factor_path);
  m.merge(cmd.get_option("--out"), "train.out", out_dir);
  m.merge(cmd.get_option("--objective"), "train.objective", objective);
  m.merge(cmd.get_option("--lambda"), "train.lambda", lambda);
  m.merge(cmd.get_option("--lr"), "train.lr", lr);
  m.merge(cmd.get_option("--epochs"), "train.epochs", epochs);
  m.merge(cmd.get_option("--patience"), "train.patience", patience);
  m.merge(cmd.get_option("--batch-size"), "train.batch_size", batch_size);
  m.merge(cmd.get_option("--a"), "train.a", a);
  m.merge(cmd.get_option("--b"), "train.b", b);
  m.merge(cmd.get_option("--z"), "train.z", z);
  m.merge(cmd.get_option("--dim"), "train.dim", d);
  m.merge(cmd.get_option("--heads"), "train.heads", heads);
  m.merge(cmd.get_option("--queries"), "train.queries", queries);
  m.merge(cmd.get_option("--grad-check"), "train.grad_check", grad_check);
  m.merge(cmd.get_option("--seed"), "train.seed", seed);

  if (objective != "sdpp" && objective != "bce")
    throw InvalidSpecError("objective must be sdpp or bce, got '" + objective +
                           "'");

  auto ds = pipe::load_dataset(data_dir + "/dataset.json");
  auto view = data::split(ds.sequences);
  auto factor = div::load_factor(factor_path);
  auto instances =
      pipe::build_all_instances(view.train, a, b, z, ds.n_items, seed);
  if (instances.empty())
    throw EmptyError("no training instance fits a=" + std::to_string(a) +
                     ", b=" + std::to_string(b));

  rep::ModelDims dims;
  dims.d = d;
  dims.heads = heads;
  dims.n_queries = queries;
  dims.vocab = ds.n_items;
  dims.max_pos = 64;
  rep::ModelParams init = rep::ModelParams::init(dims, seed);

  if (grad_check) {
    const double err = obj::finite_diff_check(instances[0], init, factor,
                                              1e-4, 200);
    std::cout << "grad_check_rel_err " << err << "\n";
    if (err > 1e-3)
      throw DegenerateError("gradient check failed: rel err " +
                            fmt_double(err) + " > 1e-3");
  }

  train::TrainConfig tcfg;
  tcfg.seed = seed;
  tcfg.lr = lr;
  tcfg.max_epochs = epochs;
  tcfg.patience = patience;
  tcfg.batch_size = batch_size;
  tcfg.lambda = lambda;
  tcfg.a = a;
  tcfg.b = b;
  tcfg.z = z;
  if (objective == "bce")
    tcfg.objective = train::TrainConfig::Objective::kBce;

  auto validator = pipe::make_validator(ds, view, lambda, a);
  auto result = train::train(instances, init, factor, tcfg, validator);

  finish_run_dir(m, out_dir);
  rep::save_checkpoint(result.params, out_dir + "/params.bin",
                       out_dir + "/manifest.json");
  std::ofstream hist(out_dir + "/history.csv");
  if (!hist) throw IoError("cannot write " + out_dir + "/history.csv");
  hist.precision(17);
  hist << "epoch,train_ll,val_recall20,val_ndcg20\n";
  for (const auto& row : result.history)
    hist << row.epoch << ',' << row.train_ll << ',' << row.val_recall20 << ','
         << row.val_ndcg20 << '\n';
  std::cout << "instances " << instances.size() << "\n"
            << "best_epoch " << result.best_epoch << "\n";
  return 0;
}

// --- eval --------------------------------------------------------------------

int cmd_eval(const std::string& config_path, const CLI::App& cmd,
             std::string data_dir, std::string checkpoint_dir,
             std::string out_dir, std::string topn_text, double lambda,
             std::string sweep_text, bool per_user, bool on_val, int a) {
  ConfigMerge m = load_merge(config_path);
  m.merge(cmd.get_option("--data"), "eval.data", data_dir);
  m.merge(cmd.get_option("--checkpoint"), "eval.checkpoint", checkpoint_dir);
  m.merge(cmd.get_option("--out"), "eval.out", out_dir);
  m.merge(cmd.get_option("--topn"), "eval.topn", topn_text);
  m.merge(cmd.get_option("--lambda"), "eval.lambda", lambda);
  m.merge(cmd.get_option("--lambda-sweep"), "eval.lambda_sweep", sweep_text);
  m.merge(cmd.get_option("--per-user"), "eval.per_user", per_user);
  m.merge(cmd.get_option("--val"), "eval.val", on_val);
  m.merge(cmd.get_option("--history"), "eval.history", a);

  const auto ns = parse_int_list(topn_text);
  auto ds = pipe::load_dataset(data_dir + "/dataset.json");
  auto view = data::split(ds.sequences);
  auto params = rep::load_checkpoint(checkpoint_dir + "/params.bin",
                                     checkpoint_dir + "/manifest.json");
  finish_run_dir(m, out_dir);

  auto summary =
      pipe::evaluate_model(ds, view, params, lambda, ns, !on_val, a);
  pipe::write_metrics_csv(summary, out_dir + "/metrics.csv");
  std::cout << "users " << summary.n_users << "\n";
  std::cout << "n,recall,ndcg,cc,ild,f1\n";
  for (const auto& [n, row] : summary.macro)
    std::printf("%d,%.6f,%.6f,%.6f,%.6f,%.6f\n", n, row.recall, row.ndcg,
                row.cc, row.ild, row.f1);

  if (!sweep_text.empty()) {
    std::ofstream sweep(out_dir + "/lambda_sweep.csv");
    if (!sweep) throw IoError("cannot write " + out_dir + "/lambda_sweep.csv");
    sweep.precision(17);
    sweep << "lambda,n,recall,ndcg,cc,ild,f1\n";
    for (double lam : parse_sweep(sweep_text)) {
      auto s = pipe::evaluate_model(ds, view, params, lam, ns, !on_val, a);
      for (const auto& [n, row] : s.macro)
        sweep << lam << ',' << n << ',' << row.recall << ',' << row.ndcg << ','
              << row.cc << ',' << row.ild << ',' << row.f1 << '\n';
    }
  }

  if (per_user) {
    std::ofstream pu(out_dir + "/per_user.csv");
    if (!pu) throw IoError("cannot write " + out_dir + "/per_user.csv");
    pu.precision(17);
    pu << "user,n,recall,ndcg,cc,ild,f1\n";
    for (size_t u = 0; u < view.train.size(); ++u) {
      std::vector<data::TemporalSet> history = view.train[u].sets;
      if (!on_val) history.push_back(view.val[u]);
      if (history.empty()) continue;
      const int take = std::min<int>(a, static_cast<int>(history.size()));
      std::vector<data::TemporalSet> tail(history.end() - take, history.end());
      auto rank = eval::rank_items(eval::predict_scores(tail, params, lambda));
      const auto& target = on_val ? view.val[u] : view.test[u];
      for (int n : ns) {
        const int eff = std::min<int>(n, static_cast<int>(rank.items.size()));
        auto row =
            eval::evaluate_topn(rank, target, ds.categories, ds.n_categories,
                                eff);
        pu << view.users[u] << ',' << n << ',' << row.recall << ',' << row.ndcg
           << ',' << row.cc << ',' << row.ild << ',' << row.f1 << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Next-set recommender: set-level DPP training over temporal sets"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "key=value config file ([section] headers map to "
                 "section.key); command-line flags override file values")
      ->check(CLI::ExistingFile);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "sessionize a raw CSV log");
  std::string in_input, in_out;
  int in_min_sets = 4, in_max_set = 50;
  ingest->add_option("--input", in_input, "CSV: user_id,item_id,category_id,timestamp")->required();
  ingest->add_option("--out", in_out, "output directory")->required();
  ingest->add_option("--min-sets", in_min_sets, "drop users with fewer day sets");
  ingest->add_option("--max-set-size", in_max_set, "truncate oversized day sets");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a planted-structure corpus");
  std::string sy_out;
  double sy_rho = 0.9;
  std::uint64_t sy_seed = 0;
  bool sy_paired = false, sy_verify = false;
  int sy_users = 60, sy_days = 40;
  synth->add_option("--out", sy_out, "output directory")->required();
  synth->add_option("--rho", sy_rho, "planted pair co-occurrence boost");
  synth->add_option("--seed", sy_seed, "corpus seed");
  synth->add_flag("--paired", sy_paired,
                  "Zipf popularity + a cross-category partner for every item");
  synth->add_flag("--verify", sy_verify, "count planted-pair co-occurrence");
  synth->add_option("--users", sy_users, "number of users");
  synth->add_option("--days", sy_days, "number of days");

  // learn-div
  auto* ldiv = app.add_subcommand("learn-div", "pre-learn the diverse item kernel");
  std::string ld_data, ld_out;
  int ld_rank = 32, ld_epochs = 100;
  double ld_lr = 1e-2;
  std::uint64_t ld_seed = 0;
  ldiv->add_option("--data", ld_data, "dataset directory")->required();
  ldiv->add_option("--out", ld_out, "output directory")->required();
  ldiv->add_option("--rank", ld_rank, "factor rank k");
  ldiv->add_option("--epochs", ld_epochs, "Adam epochs");
  ldiv->add_option("--lr", ld_lr, "learning rate");
  ldiv->add_option("--seed", ld_seed, "init/extraction seed");

  // train
  auto* train_cmd = app.add_subcommand("train", "train the set-level model");
  std::string tr_data, tr_factor, tr_out, tr_objective = "sdpp";
  double tr_lambda = 0.2, tr_lr = 2e-3;
  int tr_epochs = 40, tr_patience = 10, tr_batch = 32;
  int tr_a = 3, tr_b = 1, tr_z = 1, tr_d = 16, tr_heads = 4, tr_queries = 4;
  bool tr_grad_check = false;
  std::uint64_t tr_seed = 0;
  train_cmd->add_option("--data", tr_data, "dataset directory")->required();
  train_cmd->add_option("--factor", tr_factor, "diversity factor file")->required();
  train_cmd->add_option("--out", tr_out, "output directory")->required();
  train_cmd->add_option("--objective", tr_objective, "sdpp or bce");
  train_cmd->add_option("--lambda", tr_lambda, "prediction blend weight");
  train_cmd->add_option("--lr", tr_lr, "learning rate");
  train_cmd->add_option("--epochs", tr_epochs, "max epochs");
  train_cmd->add_option("--patience", tr_patience, "early-stopping patience");
  train_cmd->add_option("--batch-size", tr_batch, "minibatch size");
  train_cmd->add_option("--a", tr_a, "previous sets per instance");
  train_cmd->add_option("--b", tr_b, "target sets per instance");
  train_cmd->add_option("--z", tr_z, "negative sets per instance");
  train_cmd->add_option("--dim", tr_d, "embedding dimension");
  train_cmd->add_option("--heads", tr_heads, "attention heads");
  train_cmd->add_option("--queries", tr_queries, "set-attention queries");
  train_cmd->add_flag("--grad-check", tr_grad_check,
                      "finite-difference check before training; abort if rel "
                      "err > 1e-3");
  train_cmd->add_option("--seed", tr_seed, "init/shuffle/negatives seed");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  std::string ev_data, ev_ckpt, ev_out, ev_topn = "20,50", ev_sweep;
  double ev_lambda = 0.2;
  bool ev_per_user = false, ev_val = false;
  int ev_a = 3;
  eval_cmd->add_option("--data", ev_data, "dataset directory")->required();
  eval_cmd->add_option("--checkpoint", ev_ckpt, "training output directory")->required();
  eval_cmd->add_option("--out", ev_out, "output directory")->required();
  eval_cmd->add_option("--topn", ev_topn, "comma-separated top-N cutoffs");
  eval_cmd->add_option("--lambda", ev_lambda, "prediction blend weight");
  eval_cmd->add_option("--lambda-sweep", ev_sweep,
                       "lo:hi:step sweep written to lambda_sweep.csv");
  eval_cmd->add_flag("--per-user", ev_per_user, "write per-user metric rows");
  eval_cmd->add_flag("--val", ev_val, "evaluate the validation targets");
  eval_cmd->add_option("--history", ev_a, "prediction history length");

  try {
    app.parse(argc, argv);
    if (ingest->parsed())
      return cmd_ingest(config_path, *ingest, in_input, in_out, in_min_sets,
                        in_max_set);
    if (synth->parsed())
      return cmd_synth(config_path, *synth, sy_out, sy_rho, sy_seed, sy_paired,
                       sy_verify, sy_users, sy_days);
    if (ldiv->parsed())
      return cmd_learn_div(config_path, *ldiv, ld_data, ld_out, ld_rank,
                           ld_epochs, ld_lr, ld_seed);
    if (train_cmd->parsed())
      return cmd_train(config_path, *train_cmd, tr_data, tr_factor, tr_out,
                       tr_objective, tr_lambda, tr_lr, tr_epochs, tr_patience,
                       tr_batch, tr_a, tr_b, tr_z, tr_d, tr_heads, tr_queries,
                       tr_grad_check, tr_seed);
    if (eval_cmd->parsed())
      return cmd_eval(config_path, *eval_cmd, ev_data, ev_ckpt, ev_out,
                      ev_topn, ev_lambda, ev_sweep, ev_per_user, ev_val, ev_a);
    return kExitUser;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUser;
  } catch (const EmptyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const TooShortError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const NotPsdError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DegenerateError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DivergedError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const SingularError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUser;
  }
}
