#ifndef SNSREC_PARAMS_HPP
#define SNSREC_PARAMS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "snsrec/errors.hpp"

namespace snsrec::rep {

// All model tensors live in one flat vector; named views map into it.
// Gradients use an identically-shaped flat vector, which keeps Adam,
// finite differencing, and deterministic accumulation trivial.
struct TensorSpec {
  std::string name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index offset = 0;
};

class ParamStore {
 public:
  Eigen::Index add(const std::string& name, Eigen::Index rows,
                   Eigen::Index cols);
  void allocate() { data_ = Eigen::VectorXd::Zero(size_); }

  Eigen::Map<Eigen::MatrixXd> view(const std::string& name);
  Eigen::Map<const Eigen::MatrixXd> view(const std::string& name) const;
  Eigen::Map<Eigen::MatrixXd> view_in(Eigen::VectorXd& flat,
                                      const std::string& name) const;

  const std::vector<TensorSpec>& specs() const { return specs_; }
  Eigen::Index size() const { return size_; }
  Eigen::VectorXd& flat() { return data_; }
  const Eigen::VectorXd& flat() const { return data_; }

 private:
  const TensorSpec& spec(const std::string& name) const;
  std::vector<TensorSpec> specs_;
  std::unordered_map<std::string, size_t> index_;
  Eigen::Index size_ = 0;
  Eigen::VectorXd data_;
};

struct ModelDims {
  int d = 64;        // embedding width
  int heads = 4;     // attention heads
  int n_queries = 4; // trainable set-summary queries
  int vocab = 0;     // |V|
  int max_pos = 64;  // positional table length (set positions)
};

// Theta: preference/co-occurrence embeddings, three self-attention blocks,
// set-summary attention, gated fusion, and item-oriented attention.
struct ModelParams {
  ModelDims dims;
  ParamStore store;

  static ModelParams init(const ModelDims& dims, std::uint64_t seed);

  Eigen::Map<const Eigen::MatrixXd> t(const std::string& name) const {
    return store.view(name);
  }
  Eigen::Map<Eigen::MatrixXd> t(const std::string& name) {
    return store.view(name);
  }
};

// Gradient buffer shaped like a ModelParams flat vector.
struct GradBuffer {
  explicit GradBuffer(const ModelParams& p)
      : flat(Eigen::VectorXd::Zero(p.store.size())), params(&p) {}
  Eigen::Map<Eigen::MatrixXd> t(const std::string& name) {
    return params->store.view_in(flat, name);
  }
  Eigen::VectorXd flat;
  const ModelParams* params;
};

}  // namespace snsrec::rep

#endif
