#include "sbncl/heads.hpp"

namespace sbncl::heads {

namespace {
constexpr double kInitStd = 0.02;
}

void add_head_params(vit::ParamSet& params, const std::string& prefix, const HeadConfig& c,
                     Rng& rng) {
  auto fill = [&](vit::Matrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.truncated_normal(kInitStd);
  };
  fill(params.add(prefix + ".fc1.weight", c.in_dim, c.hidden_dim));
  params.add(prefix + ".fc1.bias", 1, c.hidden_dim);
  fill(params.add(prefix + ".fc2.weight", c.hidden_dim, c.out_dim));
  params.add(prefix + ".fc2.bias", 1, c.out_dim);
}

diff::NodeId head_forward(diff::Tape& tape, const vit::ParamSet& params,
                          const std::vector<diff::NodeId>& ids, const std::string& prefix,
                          diff::NodeId x) {
  using namespace diff;
  auto id_of = [&](const std::string& name) { return ids[params.by_name.at(name)]; };
  NodeId h = add_rowvec(tape, matmul(tape, x, id_of(prefix + ".fc1.weight")),
                        id_of(prefix + ".fc1.bias"));
  h = gelu(tape, h);
  return add_rowvec(tape, matmul(tape, h, id_of(prefix + ".fc2.weight")),
                    id_of(prefix + ".fc2.bias"));
}

vit::Matrix head_apply(const vit::ParamSet& params, const std::string& prefix,
                       const vit::Matrix& x) {
  vit::Matrix h = x * params.at(prefix + ".fc1.weight");
  h.array().rowwise() += params.at(prefix + ".fc1.bias").row(0).array();
  h = h.unaryExpr([](double v) { return diff::gelu_scalar(v); });
  vit::Matrix out = h * params.at(prefix + ".fc2.weight");
  out.array().rowwise() += params.at(prefix + ".fc2.bias").row(0).array();
  return out;
}

std::int64_t head_param_count(const HeadConfig& c) {
  return static_cast<std::int64_t>(c.in_dim) * c.hidden_dim + c.hidden_dim +
         static_cast<std::int64_t>(c.hidden_dim) * c.out_dim + c.out_dim;
}

}  // namespace sbncl::heads
