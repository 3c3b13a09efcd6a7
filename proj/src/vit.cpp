#include "sbncl/vit.hpp"

#include <string>

#include "sbncl/errors.hpp"

namespace sbncl::vit {

void ModelConfig::validate() const {
  if (input_len <= 0 || patch_size <= 0 || dim <= 0 || blocks <= 0 || heads <= 0 ||
      mlp_ratio <= 0) {
    throw ShapeMismatch("model config fields must be positive");
  }
  if (input_len % patch_size != 0) {
    throw LengthNotDivisible("input_len " + std::to_string(input_len) +
                             " not divisible by patch size " + std::to_string(patch_size));
  }
  if (dim % heads != 0) {
    throw ShapeMismatch("dim " + std::to_string(dim) + " not divisible by heads " +
                        std::to_string(heads));
  }
}

Matrix& ParamSet::add(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  by_name.emplace(name, static_cast<int>(tensors.size()));
  tensors.push_back({name, Matrix::Zero(rows, cols)});
  return tensors.back().value;
}

Matrix& ParamSet::at(const std::string& name) {
  auto it = by_name.find(name);
  if (it == by_name.end()) throw ShapeMismatch("no tensor named " + name);
  return tensors[it->second].value;
}

const Matrix& ParamSet::at(const std::string& name) const {
  auto it = by_name.find(name);
  if (it == by_name.end()) throw ShapeMismatch("no tensor named " + name);
  return tensors[it->second].value;
}

std::int64_t ParamSet::scalar_count() const {
  std::int64_t n = 0;
  for (const auto& t : tensors) n += t.value.size();
  return n;
}

Matrix patchify(const Eigen::Ref<const Vector>& strip, int patch_size) {
  if (patch_size <= 0 || strip.size() % patch_size != 0) {
    throw LengthNotDivisible("strip length " + std::to_string(strip.size()) +
                             " not divisible by patch size " + std::to_string(patch_size));
  }
  const Eigen::Index n = strip.size() / patch_size;
  Matrix out(n, patch_size);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.row(i) = strip.segment(i * patch_size, patch_size).transpose();
  }
  return out;
}

Matrix patchify_batch(const std::vector<Vector>& strips, int patch_size) {
  if (strips.empty()) throw EmptySignal("patchify_batch: no strips");
  const Eigen::Index per = strips[0].size() / patch_size;
  Matrix out(static_cast<Eigen::Index>(strips.size()) * per, patch_size);
  for (std::size_t s = 0; s < strips.size(); ++s) {
    out.middleRows(static_cast<Eigen::Index>(s) * per, per) = patchify(strips[s], patch_size);
  }
  return out;
}

std::int64_t param_count(const ModelConfig& c) {
  c.validate();
  const std::int64_t d = c.dim;
  const std::int64_t p = c.patch_size;
  const std::int64_t t = c.seq_len();
  const std::int64_t m = static_cast<std::int64_t>(c.mlp_ratio) * d;
  const std::int64_t embed = p * d + d;             // patch projection + bias
  const std::int64_t cls = d;                       // class token
  const std::int64_t pos = t * d;                   // positional embeddings
  const std::int64_t block = (2 * d)                // ln1 scale/shift
                             + (d * 3 * d + 3 * d)  // qkv
                             + (d * d + d)          // attention output
                             + (2 * d)              // ln2
                             + (d * m + m)          // mlp in
                             + (m * d + d);         // mlp out
  const std::int64_t final_ln = 2 * d;
  return embed + cls + pos + c.blocks * block + final_ln;
}

namespace {

void fill_truncated_normal(Matrix& m, Rng& rng, double stddev) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.truncated_normal(stddev);
}

}  // namespace

ParamSet init_params(const ModelConfig& c, Rng& rng) {
  c.validate();
  constexpr double kInitStd = 0.02;
  const int d = c.dim;
  const int m = c.mlp_ratio * d;
  ParamSet p;
  fill_truncated_normal(p.add("patch_embed.weight", c.patch_size, d), rng, kInitStd);
  p.add("patch_embed.bias", 1, d);
  fill_truncated_normal(p.add("class_token", 1, d), rng, kInitStd);
  fill_truncated_normal(p.add("pos_embed", c.seq_len(), d), rng, kInitStd);
  for (int b = 0; b < c.blocks; ++b) {
    const std::string pre = "block" + std::to_string(b) + ".";
    p.add(pre + "ln1.gamma", 1, d).setOnes();
    p.add(pre + "ln1.beta", 1, d);
    fill_truncated_normal(p.add(pre + "attn.qkv.weight", d, 3 * d), rng, kInitStd);
    p.add(pre + "attn.qkv.bias", 1, 3 * d);
    fill_truncated_normal(p.add(pre + "attn.out.weight", d, d), rng, kInitStd);
    p.add(pre + "attn.out.bias", 1, d);
    p.add(pre + "ln2.gamma", 1, d).setOnes();
    p.add(pre + "ln2.beta", 1, d);
    fill_truncated_normal(p.add(pre + "mlp.fc1.weight", d, m), rng, kInitStd);
    p.add(pre + "mlp.fc1.bias", 1, m);
    fill_truncated_normal(p.add(pre + "mlp.fc2.weight", m, d), rng, kInitStd);
    p.add(pre + "mlp.fc2.bias", 1, d);
  }
  p.add("final_ln.gamma", 1, d).setOnes();
  p.add("final_ln.beta", 1, d);
  return p;
}

ParamSet init_params(const ModelConfig& c, std::uint64_t seed) {
  Rng rng(seed);
  return init_params(c, rng);
}

std::vector<diff::NodeId> register_params(diff::Tape& tape, const ParamSet& params,
                                          bool requires_grad) {
  std::vector<diff::NodeId> ids;
  ids.reserve(params.tensors.size());
  for (const auto& t : params.tensors) ids.push_back(tape.parameter(&t.value, requires_grad));
  return ids;
}

diff::NodeId encoder_forward(diff::Tape& tape, const ModelConfig& c, const ParamSet& params,
                             const std::vector<diff::NodeId>& ids, diff::NodeId patches,
                             int batch) {
  using namespace diff;
  auto id_of = [&](const std::string& name) { return ids[params.by_name.at(name)]; };
  const int d = c.dim;
  const int t_len = c.seq_len();

  NodeId x = add_rowvec(tape, matmul(tape, patches, id_of("patch_embed.weight")),
                        id_of("patch_embed.bias"));
  x = prepend_rows(tape, x, id_of("class_token"), batch);
  x = tile_rows_add(tape, x, id_of("pos_embed"), batch);
  for (int b = 0; b < c.blocks; ++b) {
    const std::string pre = "block" + std::to_string(b) + ".";
    NodeId h = layernorm(tape, x, id_of(pre + "ln1.gamma"), id_of(pre + "ln1.beta"));
    NodeId qkv = add_rowvec(tape, matmul(tape, h, id_of(pre + "attn.qkv.weight")),
                            id_of(pre + "attn.qkv.bias"));
    NodeId q = slice_cols(tape, qkv, 0, d);
    NodeId k = slice_cols(tape, qkv, d, d);
    NodeId v = slice_cols(tape, qkv, 2 * d, d);
    NodeId a = attention(tape, q, k, v, batch, c.heads);
    a = add_rowvec(tape, matmul(tape, a, id_of(pre + "attn.out.weight")),
                   id_of(pre + "attn.out.bias"));
    x = add(tape, x, a);
    NodeId h2 = layernorm(tape, x, id_of(pre + "ln2.gamma"), id_of(pre + "ln2.beta"));
    NodeId mid = gelu(tape, add_rowvec(tape, matmul(tape, h2, id_of(pre + "mlp.fc1.weight")),
                                       id_of(pre + "mlp.fc1.bias")));
    NodeId out = add_rowvec(tape, matmul(tape, mid, id_of(pre + "mlp.fc2.weight")),
                            id_of(pre + "mlp.fc2.bias"));
    x = add(tape, x, out);
  }
  // Class rows first, then the final layernorm; per-row the order is identical
  // and this normalizes B rows instead of B*T.
  NodeId cls = rows_every_t(tape, x, t_len);
  return layernorm(tape, cls, id_of("final_ln.gamma"), id_of("final_ln.beta"));
}

Vector forward(const ModelConfig& c, const ParamSet& params,
               const Eigen::Ref<const Vector>& strip) {
  if (strip.size() != c.input_len) {
    throw ShapeMismatch("strip length " + std::to_string(strip.size()) + ", expected " +
                        std::to_string(c.input_len));
  }
  diff::Tape tape;
  auto ids = register_params(tape, params, false);
  diff::NodeId patches = tape.constant(patchify(strip, c.patch_size));
  diff::NodeId rep = encoder_forward(tape, c, params, ids, patches, 1);
  return tape.value(rep).row(0).transpose();
}

Matrix forward_batch(const ModelConfig& c, const ParamSet& params,
                     const std::vector<Vector>& strips) {
  for (const auto& s : strips) {
    if (s.size() != c.input_len) {
      throw ShapeMismatch("strip length " + std::to_string(s.size()) + ", expected " +
                          std::to_string(c.input_len));
    }
  }
  diff::Tape tape;
  auto ids = register_params(tape, params, false);
  diff::NodeId patches = tape.constant(patchify_batch(strips, c.patch_size));
  diff::NodeId rep = encoder_forward(tape, c, params, ids, patches,
                                     static_cast<int>(strips.size()));
  return tape.value(rep);
}

}  // namespace sbncl::vit
