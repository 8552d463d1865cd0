#ifndef SNSREC_OBJECTIVE_HPP
#define SNSREC_OBJECTIVE_HPP

#include <Eigen/Dense>
#include <vector>

#include "snsrec/diversity.hpp"
#include "snsrec/linalg.hpp"
#include "snsrec/representations.hpp"

namespace snsrec::obj {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Quality weight of one structure: item relevance terms plus one cohesion
// term per unordered item pair (absent for singleton sets).
struct StructureWeight {
  double value = 0.0;
  std::vector<double> item_scores;
  std::vector<double> edge_scores;
};

StructureWeight structure_weight(const data::TemporalSet& s,
                                 const VectorXd& p_s, const MatrixXd& c_s,
                                 const rep::ModelParams& params);

// Sequence-specified kernel over the instance's A+B+Z structures:
// L_ab = q_a * phi_a . phi_b * q_b with q = exp(centered weight).
struct SdppKernel {
  MatrixXd l;
  la::IndexSet a_idx, b_idx, z_idx;
  std::vector<StructureWeight> weights;
  VectorXd q;       // exponentiated (centered) weights
  MatrixXd phi;     // k x N structure features
  MatrixXd sims;    // N x N structure-feature Gram
};

struct InstanceCache {
  rep::PrefCache pref;
  rep::CoCache co;
  SdppKernel kernel;
};

SdppKernel assemble_kernel(const data::TrainingInstance& inst,
                           const rep::ModelParams& params,
                           const div::DiversityFactor& f, bool center = true,
                           InstanceCache* cache = nullptr);

// log det(L_{A u B}) - log det(L + I_notA) for an explicit kernel.
double kernel_loglik(const MatrixXd& l, const la::IndexSet& a,
                     const la::IndexSet& ab);

double instance_loglik(const data::TrainingInstance& inst,
                       const rep::ModelParams& params,
                       const div::DiversityFactor& f, bool center = true);

struct LoglikGradResult {
  double loglik = 0.0;
  VectorXd weight_grad;  // d loglik / d structure weight
};

// Accumulates d loglik / d Theta into `g`; the diversity factor is frozen
// and receives no gradient.
LoglikGradResult loglik_grad(const data::TrainingInstance& inst,
                             const rep::ModelParams& params,
                             const div::DiversityFactor& f, rep::GradBuffer& g,
                             bool center = true);

// Central-difference probe of the analytic gradient on a deterministic
// subsample of >= min_coords coordinates; returns the worst relative error.
double finite_diff_check(const data::TrainingInstance& inst,
                         const rep::ModelParams& params,
                         const div::DiversityFactor& f, double h,
                         int min_coords = 200);

}  // namespace snsrec::obj

#endif
