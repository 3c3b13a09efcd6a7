#pragma once

#include "sbncl/rng.hpp"
#include "sbncl/tape.hpp"
#include "sbncl/vit.hpp"

namespace sbncl::heads {

// Two-layer MLP head (linear, GELU, linear). Projector runs on both paths;
// the predictor exists only on the student path.
struct HeadConfig {
  int in_dim = 128;
  int hidden_dim = 256;  // 2 x model dim
  int out_dim = 64;
};

// Appends "<prefix>.fc1.weight" etc. to `params`.
void add_head_params(vit::ParamSet& params, const std::string& prefix, const HeadConfig& config,
                     Rng& rng);

diff::NodeId head_forward(diff::Tape& tape, const vit::ParamSet& params,
                          const std::vector<diff::NodeId>& param_ids, const std::string& prefix,
                          diff::NodeId x);

// Plain (no-tape) evaluation used at embedding/eval time.
vit::Matrix head_apply(const vit::ParamSet& params, const std::string& prefix,
                       const vit::Matrix& x);

std::int64_t head_param_count(const HeadConfig& config);

}  // namespace sbncl::heads
