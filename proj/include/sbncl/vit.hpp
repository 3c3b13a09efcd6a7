#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sbncl/rng.hpp"
#include "sbncl/tape.hpp"

namespace sbncl::vit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// 1D ViT encoder hyperparameters. Defaults are the trained configuration:
// 1000-sample strips cut into 20-sample patches, width 128, 6 pre-norm
// blocks with 4 heads, 4x MLP, learned positional embeddings, class-token
// readout through a final layernorm.
struct ModelConfig {
  int input_len = 1000;
  int patch_size = 20;
  int dim = 128;
  int blocks = 6;
  int heads = 4;
  int mlp_ratio = 4;

  int n_patches() const { return input_len / patch_size; }
  int seq_len() const { return n_patches() + 1; }  // +1 for the class token
  void validate() const;
};

struct NamedTensor {
  std::string name;
  Matrix value;
};

// Ordered, named weight collection. Order is fixed at construction so that
// optimizer updates, EMA and serialization all traverse tensors identically.
struct ParamSet {
  std::vector<NamedTensor> tensors;
  std::unordered_map<std::string, int> by_name;

  Matrix& add(const std::string& name, Eigen::Index rows, Eigen::Index cols);
  Matrix& at(const std::string& name);
  const Matrix& at(const std::string& name) const;
  bool has(const std::string& name) const { return by_name.count(name) != 0; }
  std::int64_t scalar_count() const;
};

// Splits a strip into consecutive patch_size-sample patches, one per row.
Matrix patchify(const Eigen::Ref<const Vector>& strip, int patch_size);
// Stacks patchify() of several strips: (B * n_patches) x patch_size.
Matrix patchify_batch(const std::vector<Vector>& strips, int patch_size);

// Closed-form trainable-parameter count for the encoder described by `config`.
std::int64_t param_count(const ModelConfig& config);

// Deterministic initialization: truncated normal (std 0.02, clipped at two
// standard deviations) for weights, class token and positional embeddings;
// zeros for biases; ones/zeros for layernorm scale/shift.
ParamSet init_params(const ModelConfig& config, std::uint64_t seed);
ParamSet init_params(const ModelConfig& config, Rng& rng);

// Tape node ids for a ParamSet, aligned with tensor order.
std::vector<diff::NodeId> register_params(diff::Tape& tape, const ParamSet& params,
                                          bool requires_grad);

// Builds the encoder forward pass for a stacked batch of patch matrices
// ((B * n_patches) x patch_size) and returns the BxD node of class-token
// representations after the final layernorm. `param_ids` must come from
// register_params() on a ParamSet created with the same config.
diff::NodeId encoder_forward(diff::Tape& tape, const ModelConfig& config,
                             const ParamSet& params,
                             const std::vector<diff::NodeId>& param_ids,
                             diff::NodeId patches, int batch);

// Convenience single-strip inference path (builds a throwaway tape).
Vector forward(const ModelConfig& config, const ParamSet& params,
               const Eigen::Ref<const Vector>& strip);

// Batched inference: one row of `out` per strip.
Matrix forward_batch(const ModelConfig& config, const ParamSet& params,
                     const std::vector<Vector>& strips);

}  // namespace sbncl::vit
