#include "snsrec/objective.hpp"

#include <algorithm>
#include <cmath>

namespace snsrec::obj {

namespace {

std::vector<const data::TemporalSet*> all_structures(
    const data::TrainingInstance& inst) {
  std::vector<const data::TemporalSet*> out;
  for (const auto& s : inst.previous) out.push_back(&s);
  for (const auto& s : inst.targets) out.push_back(&s);
  for (const auto& s : inst.negatives) out.push_back(&s);
  return out;
}

// PSD inverse via Cholesky with the same jitter ladder as logdet_psd.
MatrixXd psd_inverse(const MatrixXd& m) {
  static const double jitters[] = {0.0, 1e-10, 1e-8, 1e-6};
  const double scale =
      std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  for (double delta : jitters) {
    MatrixXd j = m;
    if (delta > 0) j.diagonal().array() += delta * scale;
    Eigen::LLT<MatrixXd> llt(j);
    if (llt.info() == Eigen::Success)
      return llt.solve(MatrixXd::Identity(m.rows(), m.cols()));
  }
  throw SingularError("kernel block numerically singular after jitter");
}

}  // namespace

StructureWeight structure_weight(const data::TemporalSet& s,
                                 const VectorXd& p_s, const MatrixXd& c_s,
                                 const rep::ModelParams& params) {
  if (s.items.empty()) throw EmptyError("structure weight of empty set");
  StructureWeight w;
  for (int item : s.items)
    w.item_scores.push_back(rep::preference_score(p_s, item, params));
  // unordered pairs, singleton sets carry no edge term
  for (size_t i = 0; i < s.items.size(); ++i)
    for (size_t j = i + 1; j < s.items.size(); ++j)
      w.edge_scores.push_back(
          rep::cohesion_score(c_s.col(s.items[i]), c_s.col(s.items[j])));
  for (double v : w.item_scores) w.value += v;
  for (double v : w.edge_scores) w.value += v;
  return w;
}

SdppKernel assemble_kernel(const data::TrainingInstance& inst,
                           const rep::ModelParams& params,
                           const div::DiversityFactor& f, bool center,
                           InstanceCache* cache) {
  auto structures = all_structures(inst);
  const int n = static_cast<int>(structures.size());
  if (n < 2) throw ShapeMismatchError("instance needs A+B+Z >= 2 structures");

  InstanceCache local;
  InstanceCache& c = cache ? *cache : local;

  VectorXd p_s = rep::preference_forward(inst.previous, params, c.pref);
  // co-occurrence attention conditioned on previous sets only
  MatrixXd c_s = rep::co_occurrence_reps(inst.previous, params, c.co);

  SdppKernel kernel;
  const int a_n = static_cast<int>(inst.previous.size());
  const int b_n = static_cast<int>(inst.targets.size());
  for (int i = 0; i < a_n; ++i) kernel.a_idx.push_back(i);
  for (int i = 0; i < b_n; ++i) kernel.b_idx.push_back(a_n + i);
  for (int i = a_n + b_n; i < n; ++i) kernel.z_idx.push_back(i);

  VectorXd w(n);
  kernel.phi.resize(f.a.cols(), n);
  for (int i = 0; i < n; ++i) {
    kernel.weights.push_back(structure_weight(*structures[i], p_s, c_s, params));
    w(i) = kernel.weights.back().value;
    kernel.phi.col(i) = div::structure_feature(*structures[i], f);
  }
  const double shift = center ? w.mean() : 0.0;
  kernel.q = (w.array() - shift).exp().matrix();
  kernel.sims = kernel.phi.transpose() * kernel.phi;
  kernel.l = kernel.q.asDiagonal() * kernel.sims * kernel.q.asDiagonal();

  if (cache) cache->kernel = kernel;
  return kernel;
}

double kernel_loglik(const MatrixXd& l, const la::IndexSet& a,
                     const la::IndexSet& ab) {
  MatrixXd norm = l;
  std::vector<bool> in_a(l.rows(), false);
  for (int i : a) in_a[i] = true;
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    if (!in_a[i]) norm(i, i) += 1.0;
  return la::logdet_psd(la::submatrix(l, ab)) - la::logdet_psd(norm);
}

double instance_loglik(const data::TrainingInstance& inst,
                       const rep::ModelParams& params,
                       const div::DiversityFactor& f, bool center) {
  SdppKernel kernel = assemble_kernel(inst, params, f, center);
  la::IndexSet ab = kernel.a_idx;
  ab.insert(ab.end(), kernel.b_idx.begin(), kernel.b_idx.end());
  return kernel_loglik(kernel.l, kernel.a_idx, ab);
}

LoglikGradResult loglik_grad(const data::TrainingInstance& inst,
                             const rep::ModelParams& params,
                             const div::DiversityFactor& f, rep::GradBuffer& g,
                             bool center) {
  InstanceCache cache;
  SdppKernel kernel = assemble_kernel(inst, params, f, center, &cache);
  const int n = static_cast<int>(kernel.l.rows());

  la::IndexSet ab = kernel.a_idx;
  ab.insert(ab.end(), kernel.b_idx.begin(), kernel.b_idx.end());

  MatrixXd norm = kernel.l;
  std::vector<bool> in_a(n, false);
  for (int i : kernel.a_idx) in_a[i] = true;
  for (int i = 0; i < n; ++i)
    if (!in_a[i]) norm(i, i) += 1.0;

  LoglikGradResult result;
  result.loglik = la::logdet_psd(la::submatrix(kernel.l, ab)) -
                  la::logdet_psd(norm);

  // dL/dK entries: inverse of the A u B block scattered in, minus the
  // normalizer inverse.
  MatrixXd gl = -psd_inverse(norm);
  MatrixXd ab_inv = psd_inverse(la::submatrix(kernel.l, ab));
  for (size_t i = 0; i < ab.size(); ++i)
    for (size_t j = 0; j < ab.size(); ++j)
      gl(ab[i], ab[j]) += ab_inv(i, j);

  // chain into structure weights: L_ab = exp(w_a - shift) S_ab exp(w_b - shift)
  MatrixXd gl_hadamard = gl.cwiseProduct(kernel.l);
  VectorXd gw = 2.0 * gl_hadamard.rowwise().sum();
  if (center) gw.array() -= 2.0 * gl_hadamard.sum() / double(n);
  result.weight_grad = gw;

  // chain into p^(S), C^(S), and the direct preference-embedding path
  auto structures = all_structures(inst);
  VectorXd p_s = cache.pref.fuse.p_s;
  const MatrixXd& c_s = cache.co.c_s;
  VectorXd gp_s = VectorXd::Zero(params.dims.d);
  MatrixXd gc_s = MatrixXd::Zero(c_s.rows(), c_s.cols());
  auto ge_p = g.t("e_p");
  auto e_p = params.t("e_p");
  for (int si = 0; si < n; ++si) {
    const auto& items = structures[si]->items;
    const double gwi = gw(si);
    for (int item : items) {
      gp_s += gwi * e_p.col(item);
      ge_p.col(item) += gwi * p_s;
    }
    if (items.size() > 1) {
      VectorXd col_sum = VectorXd::Zero(c_s.rows());
      for (int item : items) col_sum += c_s.col(item);
      for (int item : items)
        gc_s.col(item) += gwi * (col_sum - c_s.col(item));
    }
  }

  rep::preference_backward(params, cache.pref, gp_s, g);
  rep::co_occurrence_backward(params, cache.co, gc_s, g);
  return result;
}

double finite_diff_check(const data::TrainingInstance& inst,
                         const rep::ModelParams& params,
                         const div::DiversityFactor& f, double h,
                         int min_coords) {
  if (!(h > 0)) throw InvalidSpecError("finite difference step must be > 0");

  rep::GradBuffer g(params);
  loglik_grad(inst, params, f, g);

  rep::ModelParams probe = params;
  const Eigen::Index size = probe.store.size();
  const int coords = std::min<Eigen::Index>(size, min_coords);

  double worst = 0.0;
  for (int c = 0; c < coords; ++c) {
    const Eigen::Index idx = (Eigen::Index)((double)c * size / coords);
    const double orig = probe.store.flat()(idx);
    probe.store.flat()(idx) = orig + h;
    const double up = instance_loglik(inst, probe, f);
    probe.store.flat()(idx) = orig - h;
    const double down = instance_loglik(inst, probe, f);
    probe.store.flat()(idx) = orig;
    const double fd = (up - down) / (2.0 * h);
    const double an = g.flat(idx);
    const double denom = std::max({std::abs(fd), std::abs(an), 1e-3});
    worst = std::max(worst, std::abs(fd - an) / denom);
  }
  return worst;
}

}  // namespace snsrec::obj
