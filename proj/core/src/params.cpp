#include "snsrec/params.hpp"

#include <cmath>
#include <random>

namespace snsrec::rep {

Eigen::Index ParamStore::add(const std::string& name, Eigen::Index rows,
                             Eigen::Index cols) {
  if (index_.count(name)) throw ShapeMismatchError("duplicate tensor " + name);
  index_[name] = specs_.size();
  specs_.push_back({name, rows, cols, size_});
  size_ += rows * cols;
  return size_;
}

const TensorSpec& ParamStore::spec(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ShapeMismatchError("unknown tensor " + name);
  return specs_[it->second];
}

Eigen::Map<Eigen::MatrixXd> ParamStore::view(const std::string& name) {
  const auto& s = spec(name);
  return {data_.data() + s.offset, s.rows, s.cols};
}

Eigen::Map<const Eigen::MatrixXd> ParamStore::view(
    const std::string& name) const {
  const auto& s = spec(name);
  return {data_.data() + s.offset, s.rows, s.cols};
}

Eigen::Map<Eigen::MatrixXd> ParamStore::view_in(Eigen::VectorXd& flat,
                                                const std::string& name) const {
  const auto& s = spec(name);
  if (flat.size() != size_) throw ShapeMismatchError("flat buffer size");
  return {flat.data() + s.offset, s.rows, s.cols};
}

ModelParams ModelParams::init(const ModelDims& dims, std::uint64_t seed) {
  if (dims.d % dims.heads != 0)
    throw ShapeMismatchError("d must be divisible by heads");
  if (dims.vocab < 1) throw ShapeMismatchError("vocab must be positive");

  ModelParams p;
  p.dims = dims;
  const int d = dims.d;
  auto& st = p.store;
  st.add("e_p", d, dims.vocab);
  st.add("e_c", d, dims.vocab);
  st.add("pos", d, dims.max_pos);
  for (const char* block : {"mhsa_p", "mhsa_c", "mhsa_s"}) {
    st.add(std::string(block) + ".wq", d, d);
    st.add(std::string(block) + ".wk", d, d);
    st.add(std::string(block) + ".wv", d, d);
    st.add(std::string(block) + ".wo", d, d);
  }
  st.add("set_q", d, dims.n_queries);
  st.add("set.wk", d, d);
  st.add("set.wv", d, d);
  st.add("gate.w", d, 2 * d);
  st.add("gate.b", d, 1);
  st.add("ioa.wq", d, d);
  st.add("ioa.wk", d, d);
  st.add("ioa.wv", d, d);
  st.allocate();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> emb(0.0, 1.0 / std::sqrt(double(d)));
  std::normal_distribution<double> weight(0.0, 1.0 / std::sqrt(double(d)));
  // The candidate-item attention sits behind two attention layers whose
  // outputs shrink relative to the embeddings; a unit-scale start keeps its
  // softmax away from the uniform fixed point where gradients vanish.
  std::normal_distribution<double> attn_weight(0.0, 1.0);
  for (const auto& s : st.specs()) {
    auto view = st.view_in(st.flat(), s.name);
    const bool is_emb = s.name == "e_p" || s.name == "e_c" ||
                        s.name == "pos" || s.name == "set_q";
    const bool is_ioa = s.name.rfind("ioa.", 0) == 0;
    for (Eigen::Index j = 0; j < s.cols; ++j)
      for (Eigen::Index i = 0; i < s.rows; ++i)
        view(i, j) = is_emb ? emb(rng) : (is_ioa ? attn_weight(rng) : weight(rng));
  }
  // gate bias starts at zero
  p.t("gate.b").setZero();
  return p;
}

}  // namespace snsrec::rep
