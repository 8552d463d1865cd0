#ifndef SNSREC_DIVERSITY_HPP
#define SNSREC_DIVERSITY_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "snsrec/data.hpp"
#include "snsrec/errors.hpp"

namespace snsrec::div {

// Low-rank factor of the category-aware diverse kernel K = A A^T.
// Row i of `a` holds the diversity features of item i. Frozen (read-only)
// once pre-learning is done.
struct DiversityFactor {
  Eigen::MatrixXd a;  // |V| x k
  int k = 32;
  double reg_delta = 1e-3;

  int n_items() const { return static_cast<int>(a.rows()); }
};

// Paired diverse/negative item subsets for kernel pre-learning.
struct DiversePairBatch {
  std::vector<std::vector<int>> positives;
  std::vector<std::vector<int>> negatives;  // paired, same sizes
};

struct ExtractConfig {
  int min_set_size = 5;
  int max_set_size = 20;
  int min_subset_items = 3;
  int max_variants = 2;   // caps subsets per multi-member-category set
  int max_subset_items = 20;
};

// Maximal-category subsets of one set: one representative per category,
// varying multi-member-category representatives up to max_variants.
std::vector<std::vector<int>> expand_diverse_subsets(
    const std::vector<int>& items, const data::CategoryMap& categories,
    const ExtractConfig& cfg);

// Scans observed sets, emits diverse positives with size-matched random
// negatives drawn from the full catalog. Deterministic given rng_seed.
DiversePairBatch extract_diverse_subsets(
    const std::vector<data::TemporalSet>& sets,
    const data::CategoryMap& categories, int n_items, const ExtractConfig& cfg,
    std::uint64_t rng_seed);

struct DiverseLearnConfig {
  double lr = 1e-2;
  int epochs = 100;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct DiverseLearnResult {
  DiversityFactor factor;
  std::vector<double> loglik_history;  // per-epoch objective
};

// sum over pairs of [log det(K_T+ + dI) - log det(K_T- + dI)]
double diverse_loglik(const DiversePairBatch& pairs,
                      const DiversityFactor& f);

// Analytic gradient of the pair objective w.r.t. the factor rows.
Eigen::MatrixXd diverse_loglik_grad(const DiversePairBatch& pairs,
                                    const DiversityFactor& f);

// Adam ascent on the factor. Throws DegenerateError if the objective
// becomes NaN even after a warm restart from a fresh initialization.
DiverseLearnResult learn_diverse_kernel(const DiversePairBatch& pairs,
                                        int n_items, int k,
                                        const DiverseLearnConfig& cfg,
                                        double reg_delta = 1e-3);

// Structure similarity: (sum of rows over sa) . (sum of rows over sb).
double structure_similarity(const data::TemporalSet& sa,
                            const data::TemporalSet& sb,
                            const DiversityFactor& f);

// Set-level diversity feature phi(S) = sum of factor rows of its items.
Eigen::VectorXd structure_feature(const data::TemporalSet& s,
                                  const DiversityFactor& f);

// Versioned little-endian binary blob: {magic, version, |V|, k} + rows.
void save_factor(const DiversityFactor& f, const std::string& path);
DiversityFactor load_factor(const std::string& path);
void export_factor_csv(const DiversityFactor& f, const std::string& path);

}  // namespace snsrec::div

#endif
