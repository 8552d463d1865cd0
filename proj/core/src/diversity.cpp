#include "snsrec/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <unordered_set>

namespace snsrec::div {

std::vector<std::vector<int>> expand_diverse_subsets(
    const std::vector<int>& items, const data::CategoryMap& categories,
    const ExtractConfig& cfg) {
  std::map<int, std::vector<int>> by_cat;  // sorted category order
  for (int item : items) {
    if (item < 0 || item >= static_cast<int>(categories.size()))
      throw IndexOutOfRangeError("item outside category map");
    by_cat[categories[item]].push_back(item);
  }
  if (static_cast<int>(by_cat.size()) < cfg.min_subset_items) return {};

  std::vector<std::vector<int>> groups;
  for (auto& [cat, members] : by_cat) {
    std::sort(members.begin(), members.end());
    groups.push_back(members);
    if (static_cast<int>(groups.size()) >= cfg.max_subset_items) break;
  }

  // odometer over per-category representatives, capped at max_variants
  std::vector<std::vector<int>> out;
  std::vector<size_t> cursor(groups.size(), 0);
  while (static_cast<int>(out.size()) < cfg.max_variants) {
    std::vector<int> subset;
    for (size_t g = 0; g < groups.size(); ++g)
      subset.push_back(groups[g][cursor[g]]);
    std::sort(subset.begin(), subset.end());
    out.push_back(std::move(subset));
    size_t g = groups.size();
    while (g > 0) {
      --g;
      if (cursor[g] + 1 < groups[g].size()) {
        ++cursor[g];
        std::fill(cursor.begin() + g + 1, cursor.end(), 0);
        break;
      }
      if (g == 0) return out;  // odometer exhausted
    }
  }
  return out;
}

DiversePairBatch extract_diverse_subsets(
    const std::vector<data::TemporalSet>& sets,
    const data::CategoryMap& categories, int n_items, const ExtractConfig& cfg,
    std::uint64_t rng_seed) {
  DiversePairBatch batch;
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<int> pick(0, n_items - 1);

  for (const auto& s : sets) {
    const int sz = static_cast<int>(s.items.size());
    if (sz < cfg.min_set_size || sz > cfg.max_set_size) continue;
    for (auto& pos : expand_diverse_subsets(s.items, categories, cfg)) {
      std::vector<int> neg;
      std::unordered_set<int> chosen;
      while (neg.size() < pos.size()) {
        int cand = pick(rng);
        if (!chosen.insert(cand).second) continue;
        neg.push_back(cand);
      }
      std::sort(neg.begin(), neg.end());
      batch.positives.push_back(std::move(pos));
      batch.negatives.push_back(std::move(neg));
    }
  }
  return batch;
}

namespace {

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& a,
                            const std::vector<int>& idx) {
  Eigen::MatrixXd out(idx.size(), a.cols());
  for (size_t i = 0; i < idx.size(); ++i) out.row(i) = a.row(idx[i]);
  return out;
}

double subset_logdet(const Eigen::MatrixXd& a, const std::vector<int>& idx,
                     double delta) {
  Eigen::MatrixXd at = gather_rows(a, idx);
  Eigen::MatrixXd m = at * at.transpose();
  m.diagonal().array() += delta;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  double acc = 0.0;
  Eigen::VectorXd diag = llt.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) acc += std::log(diag(i));
  return 2.0 * acc;
}

// d/dA log det(A_T A_T^T + dI) = 2 M^{-1} A_T, scattered to rows of T
void accumulate_logdet_grad(const Eigen::MatrixXd& a,
                            const std::vector<int>& idx, double delta,
                            double sign, Eigen::MatrixXd& grad) {
  Eigen::MatrixXd at = gather_rows(a, idx);
  Eigen::MatrixXd m = at * at.transpose();
  m.diagonal().array() += delta;
  Eigen::MatrixXd g = 2.0 * m.ldlt().solve(at);
  for (size_t i = 0; i < idx.size(); ++i)
    grad.row(idx[i]) += sign * g.row(i);
}

}  // namespace

double diverse_loglik(const DiversePairBatch& pairs,
                      const DiversityFactor& f) {
  double ll = 0.0;
  for (size_t p = 0; p < pairs.positives.size(); ++p) {
    ll += subset_logdet(f.a, pairs.positives[p], f.reg_delta);
    ll -= subset_logdet(f.a, pairs.negatives[p], f.reg_delta);
  }
  return ll;
}

Eigen::MatrixXd diverse_loglik_grad(const DiversePairBatch& pairs,
                                    const DiversityFactor& f) {
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(f.a.rows(), f.a.cols());
  for (size_t p = 0; p < pairs.positives.size(); ++p) {
    accumulate_logdet_grad(f.a, pairs.positives[p], f.reg_delta, +1.0, grad);
    accumulate_logdet_grad(f.a, pairs.negatives[p], f.reg_delta, -1.0, grad);
  }
  return grad;
}

DiverseLearnResult learn_diverse_kernel(const DiversePairBatch& pairs,
                                        int n_items, int k,
                                        const DiverseLearnConfig& cfg,
                                        double reg_delta) {
  if (pairs.positives.empty())
    throw EmptyError("no diverse subset pairs to learn from");
  if (pairs.positives.size() != pairs.negatives.size())
    throw ShapeMismatchError("positive/negative pair counts differ");

  for (int attempt = 0; attempt < 2; ++attempt) {
    DiversityFactor f;
    f.k = k;
    f.reg_delta = reg_delta;
    std::mt19937_64 rng(cfg.seed + attempt * 7919);
    std::normal_distribution<double> init(0.0, 1.0 / std::sqrt(double(k)));
    f.a.resize(n_items, k);
    for (int i = 0; i < n_items; ++i)
      for (int j = 0; j < k; ++j) f.a(i, j) = init(rng);

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_items, k);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n_items, k);
    DiverseLearnResult result;
    bool healthy = true;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
      Eigen::MatrixXd g = diverse_loglik_grad(pairs, f);
      m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
      v = cfg.adam_beta2 * v.array().matrix() +
          (1.0 - cfg.adam_beta2) * g.array().square().matrix();
      const double bc1 = 1.0 - std::pow(cfg.adam_beta1, epoch);
      const double bc2 = 1.0 - std::pow(cfg.adam_beta2, epoch);
      f.a.array() += cfg.lr * (m.array() / bc1) /
                     ((v.array() / bc2).sqrt() + cfg.adam_eps);
      double ll = diverse_loglik(pairs, f);
      if (!std::isfinite(ll)) {
        healthy = false;
        break;
      }
      result.loglik_history.push_back(ll);
    }
    if (healthy) {
      result.factor = std::move(f);
      return result;
    }
  }
  throw DegenerateError("diverse kernel objective NaN after warm restart");
}

Eigen::VectorXd structure_feature(const data::TemporalSet& s,
                                  const DiversityFactor& f) {
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(f.a.cols());
  for (int item : s.items) {
    if (item < 0 || item >= f.n_items())
      throw IndexOutOfRangeError("item outside diversity factor");
    phi += f.a.row(item).transpose();
  }
  return phi;
}

double structure_similarity(const data::TemporalSet& sa,
                            const data::TemporalSet& sb,
                            const DiversityFactor& f) {
  return structure_feature(sa, f).dot(structure_feature(sb, f));
}

namespace {
constexpr std::uint64_t kFactorMagic = 0x534e53444956464bull;  // "SNSDIVFK"
constexpr std::uint32_t kFactorVersion = 1;
}  // namespace

void save_factor(const DiversityFactor& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  std::uint64_t n = f.a.rows();
  std::uint32_t k = f.a.cols();
  out.write(reinterpret_cast<const char*>(&kFactorMagic), 8);
  out.write(reinterpret_cast<const char*>(&kFactorVersion), 4);
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&k), 4);
  out.write(reinterpret_cast<const char*>(&f.reg_delta), 8);
  for (Eigen::Index i = 0; i < f.a.rows(); ++i)
    for (Eigen::Index j = 0; j < f.a.cols(); ++j) {
      double val = f.a(i, j);
      out.write(reinterpret_cast<const char*>(&val), 8);
    }
}

DiversityFactor load_factor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::uint64_t magic = 0, n = 0;
  std::uint32_t version = 0, k = 0;
  in.read(reinterpret_cast<char*>(&magic), 8);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&k), 4);
  if (magic != kFactorMagic || version != kFactorVersion)
    throw MalformedError("not a diversity factor blob");
  DiversityFactor f;
  f.k = static_cast<int>(k);
  in.read(reinterpret_cast<char*>(&f.reg_delta), 8);
  f.a.resize(n, k);
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < k; ++j) {
      double val;
      in.read(reinterpret_cast<char*>(&val), 8);
      f.a(i, j) = val;
    }
  if (!in) throw MalformedError("truncated diversity factor blob");
  return f;
}

void export_factor_csv(const DiversityFactor& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < f.a.rows(); ++i) {
    for (Eigen::Index j = 0; j < f.a.cols(); ++j) {
      if (j) out << ',';
      out << f.a(i, j);
    }
    out << '\n';
  }
}

}  // namespace snsrec::div
