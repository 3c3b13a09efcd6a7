#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace sbncl::diff {

using Matrix = Eigen::MatrixXd;

using NodeId = int;

enum class Op {
  kLeaf,       // external parameter or constant input
  kMatMul,     // a * b
  kAdd,        // a + b, same shape
  kSub,        // a - b
  kMulElem,    // a .* b
  kScale,      // a * c
  kAddRowVec,  // a + broadcast row vector (bias)
  kTileRowsAdd,    // a + row-block tiled B times (positional embedding)
  kPrependRows,    // insert a shared row at the head of each T-row block
  kSliceCols,      // a.middleCols(c0, w)
  kRowsEveryT,     // rows 0, T, 2T, ... (class-token extraction)
  kLayerNorm,      // row-wise layer normalization with affine params
  kSoftmaxRows,    // row-wise softmax with max subtraction
  kGelu,           // tanh-approximation GELU
  kAttention,      // batched multi-head scaled dot-product attention
  kLog,            // elementwise natural log
  kSumAll,         // sum of all entries -> 1x1
  kMeanAll,        // mean of all entries -> 1x1
  kCosineDistSum,  // sum over rows of (1 - cosine similarity) vs constant target
};

struct Node {
  Op op = Op::kLeaf;
  std::array<NodeId, 3> in{-1, -1, -1};
  Matrix out;                      // owned forward value (empty for external leaves)
  const Matrix* ext = nullptr;     // external leaf storage, not owned
  Matrix grad;                     // cotangent accumulator, lazily allocated
  Matrix saved;                    // op-specific forward state for the backward pass
  Matrix saved2;
  bool requires_grad = false;
  // op-specific integers/scalars (slice offsets, batch/head counts, scale factors)
  int i0 = 0, i1 = 0, i2 = 0;
  double x0 = 0.0;
};

// Reverse-mode tape over dense matrices. Nodes are recorded in evaluation
// order, which is a topological order by construction; backward() walks the
// list once in reverse. Every primitive checks its output for NaN/Inf and
// throws NonFiniteValue, so divergence aborts instead of propagating.
class Tape {
 public:
  Tape() { nodes_.reserve(256); }

  // External parameter leaf; `storage` must outlive the tape.
  NodeId parameter(const Matrix* storage, bool requires_grad);
  // Owned constant input (no gradient).
  NodeId constant(Matrix value);

  const Matrix& value(NodeId id) const;
  bool requires_grad(NodeId id) const { return nodes_[id].requires_grad; }

  // Accumulates cotangents for every node that (transitively) feeds `root`
  // and requires gradients. `root` must be 1x1.
  void backward(NodeId root);

  // Gradient of the last backward() root w.r.t. node `id`; zero matrix if the
  // node did not participate.
  Matrix gradient(NodeId id) const;
  // True if a gradient accumulator exists for the node at all.
  bool has_gradient(NodeId id) const { return nodes_[id].grad.size() > 0; }

  std::size_t size() const { return nodes_.size(); }

  // --- primitive constructors (prefer the free functions below) ---
  NodeId emit(Node node);
  Node& node(NodeId id) { return nodes_[id]; }

 private:
  void backward_one(Node& n);
  void accumulate(NodeId id, const Matrix& g);
  // Matrix-free accumulation helpers used by structured ops.
  Matrix& grad_ref(NodeId id);

  std::vector<Node> nodes_;
};

// --- primitives ---
NodeId matmul(Tape& t, NodeId a, NodeId b);
NodeId add(Tape& t, NodeId a, NodeId b);
NodeId sub(Tape& t, NodeId a, NodeId b);
NodeId mul_elem(Tape& t, NodeId a, NodeId b);
NodeId scale(Tape& t, NodeId a, double c);
NodeId add_rowvec(Tape& t, NodeId a, NodeId bias);
// x is (B*T)xD, block is TxD; adds block to each of the B consecutive blocks.
NodeId tile_rows_add(Tape& t, NodeId x, NodeId block, int batch);
// x is (B*T)xD, row is 1xD; output is (B*(T+1))xD with `row` heading each block.
NodeId prepend_rows(Tape& t, NodeId x, NodeId row, int batch);
NodeId slice_cols(Tape& t, NodeId a, int col0, int width);
// x is (B*T)xD; returns BxD made of rows 0, T, 2T, ...
NodeId rows_every_t(Tape& t, NodeId x, int period);
NodeId layernorm(Tape& t, NodeId x, NodeId gamma, NodeId beta);
NodeId softmax_rows(Tape& t, NodeId x);
NodeId gelu(Tape& t, NodeId x);
// q, k, v are (B*T)xD with D divisible by heads; per (batch, head) block:
// softmax(Q K^T / sqrt(Dh)) V, concatenated back to (B*T)xD.
NodeId attention(Tape& t, NodeId q, NodeId k, NodeId v, int batch, int heads);
NodeId log_elem(Tape& t, NodeId x);
NodeId sum_all(Tape& t, NodeId x);
NodeId mean_all(Tape& t, NodeId x);
// Sum over rows of 1 - p.t / max(|p| |t|, eps). `target` must not require
// gradients: the op differentiates only through `pred` (stop-gradient side).
NodeId cosine_distance_sum(Tape& t, NodeId pred, NodeId target, double eps);

// Scalar cosine-distance helper shared with the trainer.
double cosine_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b, double eps);

// GELU tanh approximation g(x) = 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3)))
double gelu_scalar(double x);
double gelu_grad_scalar(double x);

// Central finite-difference check. `build` constructs the scalar loss on a
// fresh tape from the given parameter storage; params are perturbed in place.
// Returns max over parameter entries of |analytic - numeric| /
// max(|analytic|, |numeric|, 1e-12).
double grad_check(
    const std::function<NodeId(Tape&, const std::vector<NodeId>&)>& build,
    std::vector<Matrix>& params, double step);

}  // namespace sbncl::diff
