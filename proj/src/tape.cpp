#include "sbncl/tape.hpp"

#include <cmath>
#include <string>

#include "sbncl/errors.hpp"

namespace sbncl::diff {

namespace {

const char* op_name(Op op) {
  switch (op) {
    case Op::kLeaf: return "leaf";
    case Op::kMatMul: return "matmul";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMulElem: return "mul_elem";
    case Op::kScale: return "scale";
    case Op::kAddRowVec: return "add_rowvec";
    case Op::kTileRowsAdd: return "tile_rows_add";
    case Op::kPrependRows: return "prepend_rows";
    case Op::kSliceCols: return "slice_cols";
    case Op::kRowsEveryT: return "rows_every_t";
    case Op::kLayerNorm: return "layernorm";
    case Op::kSoftmaxRows: return "softmax_rows";
    case Op::kGelu: return "gelu";
    case Op::kAttention: return "attention";
    case Op::kLog: return "log";
    case Op::kSumAll: return "sum_all";
    case Op::kMeanAll: return "mean_all";
    case Op::kCosineDistSum: return "cosine_distance_sum";
  }
  return "?";
}

constexpr double kLayerNormEps = 1e-12;

void check_finite(const Matrix& m, Op op) {
  if (!m.allFinite()) {
    throw NonFiniteValue(std::string("output of ") + op_name(op));
  }
}

}  // namespace

double gelu_scalar(double x) {
  const double c = std::sqrt(2.0 / M_PI);
  return 0.5 * x * (1.0 + std::tanh(c * (x + 0.044715 * x * x * x)));
}

double gelu_grad_scalar(double x) {
  const double c = std::sqrt(2.0 / M_PI);
  const double u = c * (x + 0.044715 * x * x * x);
  const double th = std::tanh(u);
  const double sech2 = 1.0 - th * th;
  return 0.5 * (1.0 + th) + 0.5 * x * sech2 * c * (1.0 + 3.0 * 0.044715 * x * x);
}

double cosine_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b, double eps) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("cosine_distance: " + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()));
  }
  const double den = std::max(a.norm() * b.norm(), eps);
  return 1.0 - a.dot(b) / den;
}

NodeId Tape::parameter(const Matrix* storage, bool requires_grad) {
  Node n;
  n.op = Op::kLeaf;
  n.ext = storage;
  n.requires_grad = requires_grad;
  check_finite(*storage, Op::kLeaf);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size()) - 1;
}

NodeId Tape::constant(Matrix value) {
  Node n;
  n.op = Op::kLeaf;
  n.out = std::move(value);
  n.requires_grad = false;
  check_finite(n.out, Op::kLeaf);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size()) - 1;
}

const Matrix& Tape::value(NodeId id) const {
  const Node& n = nodes_[id];
  return n.ext ? *n.ext : n.out;
}

NodeId Tape::emit(Node node) {
  check_finite(node.out, node.op);
  for (NodeId in : node.in) {
    if (in >= 0 && nodes_[in].requires_grad) {
      node.requires_grad = true;
      break;
    }
  }
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size()) - 1;
}

Matrix& Tape::grad_ref(NodeId id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0) {
    const Matrix& v = value(id);
    n.grad = Matrix::Zero(v.rows(), v.cols());
  }
  return n.grad;
}

void Tape::accumulate(NodeId id, const Matrix& g) {
  if (!nodes_[id].requires_grad) return;
  grad_ref(id) += g;
}

Matrix Tape::gradient(NodeId id) const {
  const Node& n = nodes_[id];
  if (n.grad.size() > 0) return n.grad;
  const Matrix& v = value(id);
  return Matrix::Zero(v.rows(), v.cols());
}

void Tape::backward(NodeId root) {
  const Matrix& rv = value(root);
  if (rv.rows() != 1 || rv.cols() != 1) {
    throw ShapeMismatch("backward root must be 1x1");
  }
  for (Node& n : nodes_) n.grad.resize(0, 0);
  if (!nodes_[root].requires_grad) return;
  grad_ref(root).setConstant(1.0);
  for (NodeId id = root; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.grad.size() == 0 || n.op == Op::kLeaf) continue;
    backward_one(n);
  }
}

void Tape::backward_one(Node& n) {
  const Matrix& g = n.grad;
  switch (n.op) {
    case Op::kLeaf:
      break;
    case Op::kMatMul: {
      const Matrix& a = value(n.in[0]);
      const Matrix& b = value(n.in[1]);
      if (nodes_[n.in[0]].requires_grad) grad_ref(n.in[0]).noalias() += g * b.transpose();
      if (nodes_[n.in[1]].requires_grad) grad_ref(n.in[1]).noalias() += a.transpose() * g;
      break;
    }
    case Op::kAdd:
      accumulate(n.in[0], g);
      accumulate(n.in[1], g);
      break;
    case Op::kSub:
      accumulate(n.in[0], g);
      if (nodes_[n.in[1]].requires_grad) grad_ref(n.in[1]) -= g;
      break;
    case Op::kMulElem: {
      const Matrix& a = value(n.in[0]);
      const Matrix& b = value(n.in[1]);
      if (nodes_[n.in[0]].requires_grad) grad_ref(n.in[0]).array() += g.array() * b.array();
      if (nodes_[n.in[1]].requires_grad) grad_ref(n.in[1]).array() += g.array() * a.array();
      break;
    }
    case Op::kScale:
      if (nodes_[n.in[0]].requires_grad) grad_ref(n.in[0]) += n.x0 * g;
      break;
    case Op::kAddRowVec:
      accumulate(n.in[0], g);
      if (nodes_[n.in[1]].requires_grad) grad_ref(n.in[1]).noalias() += g.colwise().sum();
      break;
    case Op::kTileRowsAdd: {
      accumulate(n.in[0], g);
      if (nodes_[n.in[1]].requires_grad) {
        Matrix& gb = grad_ref(n.in[1]);
        const int t = static_cast<int>(gb.rows());
        for (int b = 0; b < n.i0; ++b) gb += g.middleRows(b * t, t);
      }
      break;
    }
    case Op::kPrependRows: {
      const int batch = n.i0;
      const int t_in = n.i1;  // rows per block before prepending
      if (nodes_[n.in[0]].requires_grad) {
        Matrix& gx = grad_ref(n.in[0]);
        for (int b = 0; b < batch; ++b) {
          gx.middleRows(b * t_in, t_in) += g.middleRows(b * (t_in + 1) + 1, t_in);
        }
      }
      if (nodes_[n.in[1]].requires_grad) {
        Matrix& gr = grad_ref(n.in[1]);
        for (int b = 0; b < batch; ++b) gr += g.row(b * (t_in + 1));
      }
      break;
    }
    case Op::kSliceCols:
      if (nodes_[n.in[0]].requires_grad) {
        grad_ref(n.in[0]).middleCols(n.i0, n.i1) += g;
      }
      break;
    case Op::kRowsEveryT:
      if (nodes_[n.in[0]].requires_grad) {
        Matrix& gx = grad_ref(n.in[0]);
        for (int b = 0; b < g.rows(); ++b) gx.row(b * n.i0) += g.row(b);
      }
      break;
    case Op::kLayerNorm: {
      // saved = xhat, saved2 = rstd (Nx1)
      const Matrix& xhat = n.saved;
      const Matrix& gamma = value(n.in[1]);
      const auto d = static_cast<double>(xhat.cols());
      if (nodes_[n.in[2]].requires_grad) grad_ref(n.in[2]).noalias() += g.colwise().sum();
      if (nodes_[n.in[1]].requires_grad) {
        grad_ref(n.in[1]).noalias() += (g.array() * xhat.array()).colwise().sum().matrix();
      }
      if (nodes_[n.in[0]].requires_grad) {
        Matrix dxhat = g;
        dxhat.array().rowwise() *= gamma.row(0).array();
        Eigen::VectorXd m1 = dxhat.rowwise().mean();
        Eigen::VectorXd m2 = ((dxhat.array() * xhat.array()).rowwise().sum() / d).matrix();
        Matrix dx = dxhat;
        dx.colwise() -= m1;
        dx.array() -= xhat.array().colwise() * m2.array();
        dx.array().colwise() *= n.saved2.col(0).array();
        grad_ref(n.in[0]) += dx;
      }
      break;
    }
    case Op::kSoftmaxRows: {
      if (nodes_[n.in[0]].requires_grad) {
        const Matrix& y = n.out;
        Eigen::VectorXd dot = (g.array() * y.array()).rowwise().sum();
        Matrix dx = g;
        dx.colwise() -= dot;
        dx.array() *= y.array();
        grad_ref(n.in[0]) += dx;
      }
      break;
    }
    case Op::kGelu: {
      if (nodes_[n.in[0]].requires_grad) {
        // Vectorized derivative; tanh is expressed through exp, which Eigen
        // vectorizes for doubles (plain tanh falls back to scalar libm).
        const auto x = value(n.in[0]).array();
        const double c = std::sqrt(2.0 / M_PI);
        auto u = c * (x + 0.044715 * x.cube());
        Eigen::ArrayXXd th = 1.0 - 2.0 / ((2.0 * u).exp() + 1.0);
        Eigen::ArrayXXd d = 0.5 * (1.0 + th) +
                            0.5 * x * (1.0 - th.square()) * c * (1.0 + 3.0 * 0.044715 * x.square());
        grad_ref(n.in[0]).array() += g.array() * d;
      }
      break;
    }
    case Op::kAttention: {
      const Matrix& q = value(n.in[0]);
      const Matrix& k = value(n.in[1]);
      const Matrix& v = value(n.in[2]);
      const int batch = n.i0, heads = n.i1;
      const int t = static_cast<int>(q.rows()) / batch;
      const int dh = static_cast<int>(q.cols()) / heads;
      const double sc = n.x0;
      const bool gq = nodes_[n.in[0]].requires_grad;
      const bool gk = nodes_[n.in[1]].requires_grad;
      const bool gv = nodes_[n.in[2]].requires_grad;
      Matrix* dq = gq ? &grad_ref(n.in[0]) : nullptr;
      Matrix* dk = gk ? &grad_ref(n.in[1]) : nullptr;
      Matrix* dv = gv ? &grad_ref(n.in[2]) : nullptr;
      for (int b = 0; b < batch; ++b) {
        for (int h = 0; h < heads; ++h) {
          const auto qb = q.block(b * t, h * dh, t, dh);
          const auto kb = k.block(b * t, h * dh, t, dh);
          const auto vb = v.block(b * t, h * dh, t, dh);
          const auto a = n.saved.block((b * heads + h) * t, 0, t, t);
          const auto gb = g.block(b * t, h * dh, t, dh);
          Matrix da(t, t);
          da.noalias() = gb * vb.transpose();
          Eigen::VectorXd dot = (da.array() * a.array()).rowwise().sum();
          Matrix ds = da;
          ds.colwise() -= dot;
          ds.array() *= a.array();
          if (dq) dq->block(b * t, h * dh, t, dh).noalias() += sc * (ds * kb);
          if (dk) dk->block(b * t, h * dh, t, dh).noalias() += sc * (ds.transpose() * qb);
          if (dv) dv->block(b * t, h * dh, t, dh).noalias() += a.transpose() * gb;
        }
      }
      break;
    }
    case Op::kLog: {
      if (nodes_[n.in[0]].requires_grad) {
        const Matrix& x = value(n.in[0]);
        grad_ref(n.in[0]).array() += g.array() / x.array();
      }
      break;
    }
    case Op::kSumAll:
      if (nodes_[n.in[0]].requires_grad) {
        grad_ref(n.in[0]).array() += g(0, 0);
      }
      break;
    case Op::kMeanAll:
      if (nodes_[n.in[0]].requires_grad) {
        const Matrix& x = value(n.in[0]);
        grad_ref(n.in[0]).array() += g(0, 0) / static_cast<double>(x.size());
      }
      break;
    case Op::kCosineDistSum: {
      if (nodes_[n.in[0]].requires_grad) {
        const Matrix& p = value(n.in[0]);
        const Matrix& tg = value(n.in[1]);
        const double eps = n.x0;
        Matrix& gp = grad_ref(n.in[0]);
        const double gs = g(0, 0);
        for (int r = 0; r < p.rows(); ++r) {
          const double np = p.row(r).norm();
          const double nt = tg.row(r).norm();
          const double prod = np * nt;
          if (prod > eps) {
            const double c = p.row(r).dot(tg.row(r));
            gp.row(r) -= gs * (tg.row(r) / prod - (c / (np * np * prod)) * p.row(r));
          } else {
            gp.row(r) -= gs * tg.row(r) / eps;
          }
        }
      }
      break;
    }
  }
}

// --- forward primitives ---

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ShapeMismatch(what);
}

}  // namespace

NodeId matmul(Tape& t, NodeId a, NodeId b) {
  const Matrix& av = t.value(a);
  const Matrix& bv = t.value(b);
  require(av.cols() == bv.rows(), "matmul inner dimensions");
  Node n;
  n.op = Op::kMatMul;
  n.in = {a, b, -1};
  n.out.noalias() = av * bv;
  return t.emit(std::move(n));
}

NodeId add(Tape& t, NodeId a, NodeId b) {
  const Matrix& av = t.value(a);
  const Matrix& bv = t.value(b);
  require(av.rows() == bv.rows() && av.cols() == bv.cols(), "add shapes");
  Node n;
  n.op = Op::kAdd;
  n.in = {a, b, -1};
  n.out = av + bv;
  return t.emit(std::move(n));
}

NodeId sub(Tape& t, NodeId a, NodeId b) {
  const Matrix& av = t.value(a);
  const Matrix& bv = t.value(b);
  require(av.rows() == bv.rows() && av.cols() == bv.cols(), "sub shapes");
  Node n;
  n.op = Op::kSub;
  n.in = {a, b, -1};
  n.out = av - bv;
  return t.emit(std::move(n));
}

NodeId mul_elem(Tape& t, NodeId a, NodeId b) {
  const Matrix& av = t.value(a);
  const Matrix& bv = t.value(b);
  require(av.rows() == bv.rows() && av.cols() == bv.cols(), "mul_elem shapes");
  Node n;
  n.op = Op::kMulElem;
  n.in = {a, b, -1};
  n.out = av.cwiseProduct(bv);
  return t.emit(std::move(n));
}

NodeId scale(Tape& t, NodeId a, double c) {
  Node n;
  n.op = Op::kScale;
  n.in = {a, -1, -1};
  n.x0 = c;
  n.out = c * t.value(a);
  return t.emit(std::move(n));
}

NodeId add_rowvec(Tape& t, NodeId a, NodeId bias) {
  const Matrix& av = t.value(a);
  const Matrix& bv = t.value(bias);
  require(bv.rows() == 1 && bv.cols() == av.cols(), "add_rowvec bias shape");
  Node n;
  n.op = Op::kAddRowVec;
  n.in = {a, bias, -1};
  n.out = av.rowwise() + bv.row(0);
  return t.emit(std::move(n));
}

NodeId tile_rows_add(Tape& t, NodeId x, NodeId block, int batch) {
  const Matrix& xv = t.value(x);
  const Matrix& bv = t.value(block);
  require(batch >= 1 && xv.rows() == batch * bv.rows() && xv.cols() == bv.cols(),
          "tile_rows_add shapes");
  Node n;
  n.op = Op::kTileRowsAdd;
  n.in = {x, block, -1};
  n.i0 = batch;
  n.out = xv;
  const int tr = static_cast<int>(bv.rows());
  for (int b = 0; b < batch; ++b) n.out.middleRows(b * tr, tr) += bv;
  return t.emit(std::move(n));
}

NodeId prepend_rows(Tape& t, NodeId x, NodeId row, int batch) {
  const Matrix& xv = t.value(x);
  const Matrix& rv = t.value(row);
  require(batch >= 1 && xv.rows() % batch == 0 && rv.rows() == 1 && rv.cols() == xv.cols(),
          "prepend_rows shapes");
  const int t_in = static_cast<int>(xv.rows()) / batch;
  Node n;
  n.op = Op::kPrependRows;
  n.in = {x, row, -1};
  n.i0 = batch;
  n.i1 = t_in;
  n.out.resize(batch * (t_in + 1), xv.cols());
  for (int b = 0; b < batch; ++b) {
    n.out.row(b * (t_in + 1)) = rv.row(0);
    n.out.middleRows(b * (t_in + 1) + 1, t_in) = xv.middleRows(b * t_in, t_in);
  }
  return t.emit(std::move(n));
}

NodeId slice_cols(Tape& t, NodeId a, int col0, int width) {
  const Matrix& av = t.value(a);
  require(col0 >= 0 && width >= 1 && col0 + width <= av.cols(), "slice_cols range");
  Node n;
  n.op = Op::kSliceCols;
  n.in = {a, -1, -1};
  n.i0 = col0;
  n.i1 = width;
  n.out = av.middleCols(col0, width);
  return t.emit(std::move(n));
}

NodeId rows_every_t(Tape& t, NodeId x, int period) {
  const Matrix& xv = t.value(x);
  require(period >= 1 && xv.rows() % period == 0, "rows_every_t period");
  const int batch = static_cast<int>(xv.rows()) / period;
  Node n;
  n.op = Op::kRowsEveryT;
  n.in = {x, -1, -1};
  n.i0 = period;
  n.out.resize(batch, xv.cols());
  for (int b = 0; b < batch; ++b) n.out.row(b) = xv.row(b * period);
  return t.emit(std::move(n));
}

NodeId layernorm(Tape& t, NodeId x, NodeId gamma, NodeId beta) {
  const Matrix& xv = t.value(x);
  const Matrix& gv = t.value(gamma);
  const Matrix& bv = t.value(beta);
  require(gv.rows() == 1 && bv.rows() == 1 && gv.cols() == xv.cols() && bv.cols() == xv.cols(),
          "layernorm affine shapes");
  Node n;
  n.op = Op::kLayerNorm;
  n.in = {x, gamma, beta};
  Eigen::VectorXd mean = xv.rowwise().mean();
  Matrix centered = xv.colwise() - mean;
  Eigen::VectorXd var = centered.array().square().rowwise().mean();
  Eigen::VectorXd rstd = (var.array() + kLayerNormEps).rsqrt().matrix();
  n.saved = centered;
  n.saved.array().colwise() *= rstd.array();  // xhat
  n.saved2 = rstd;
  n.out = n.saved;
  n.out.array().rowwise() *= gv.row(0).array();
  n.out.array().rowwise() += bv.row(0).array();
  return t.emit(std::move(n));
}

NodeId softmax_rows(Tape& t, NodeId x) {
  const Matrix& xv = t.value(x);
  Node n;
  n.op = Op::kSoftmaxRows;
  n.in = {x, -1, -1};
  Eigen::VectorXd mx = xv.rowwise().maxCoeff();
  n.out = (xv.colwise() - mx).array().exp().matrix();
  Eigen::VectorXd sum = n.out.rowwise().sum();
  n.out.array().colwise() /= sum.array();
  return t.emit(std::move(n));
}

NodeId gelu(Tape& t, NodeId x) {
  Node n;
  n.op = Op::kGelu;
  n.in = {x, -1, -1};
  const auto xv = t.value(x).array();
  const double c = std::sqrt(2.0 / M_PI);
  auto u = c * (xv + 0.044715 * xv.cube());
  n.out = (0.5 * xv * (2.0 - 2.0 / ((2.0 * u).exp() + 1.0))).matrix();
  return t.emit(std::move(n));
}

NodeId attention(Tape& t, NodeId q, NodeId k, NodeId v, int batch, int heads) {
  const Matrix& qv = t.value(q);
  const Matrix& kv = t.value(k);
  const Matrix& vv = t.value(v);
  require(qv.rows() == kv.rows() && qv.rows() == vv.rows() && qv.cols() == kv.cols() &&
              qv.cols() == vv.cols(),
          "attention q/k/v shapes");
  require(batch >= 1 && heads >= 1 && qv.rows() % batch == 0 && qv.cols() % heads == 0,
          "attention batch/head divisibility");
  const int tt = static_cast<int>(qv.rows()) / batch;
  const int dh = static_cast<int>(qv.cols()) / heads;
  Node n;
  n.op = Op::kAttention;
  n.in = {q, k, v};
  n.i0 = batch;
  n.i1 = heads;
  n.x0 = 1.0 / std::sqrt(static_cast<double>(dh));
  n.out.resize(qv.rows(), qv.cols());
  n.saved.resize(static_cast<Eigen::Index>(batch) * heads * tt, tt);
  Matrix s(tt, tt);
  for (int b = 0; b < batch; ++b) {
    for (int h = 0; h < heads; ++h) {
      const auto qb = qv.block(b * tt, h * dh, tt, dh);
      const auto kb = kv.block(b * tt, h * dh, tt, dh);
      const auto vb = vv.block(b * tt, h * dh, tt, dh);
      s.noalias() = n.x0 * (qb * kb.transpose());
      Eigen::VectorXd mx = s.rowwise().maxCoeff();
      s = (s.colwise() - mx).array().exp().matrix();
      Eigen::VectorXd sum = s.rowwise().sum();
      s.array().colwise() /= sum.array();
      n.saved.block((b * heads + h) * tt, 0, tt, tt) = s;
      n.out.block(b * tt, h * dh, tt, dh).noalias() = s * vb;
    }
  }
  return t.emit(std::move(n));
}

NodeId log_elem(Tape& t, NodeId x) {
  Node n;
  n.op = Op::kLog;
  n.in = {x, -1, -1};
  n.out = t.value(x).array().log().matrix();
  return t.emit(std::move(n));
}

NodeId sum_all(Tape& t, NodeId x) {
  Node n;
  n.op = Op::kSumAll;
  n.in = {x, -1, -1};
  n.out.resize(1, 1);
  n.out(0, 0) = t.value(x).sum();
  return t.emit(std::move(n));
}

NodeId mean_all(Tape& t, NodeId x) {
  Node n;
  n.op = Op::kMeanAll;
  n.in = {x, -1, -1};
  n.out.resize(1, 1);
  n.out(0, 0) = t.value(x).mean();
  return t.emit(std::move(n));
}

NodeId cosine_distance_sum(Tape& t, NodeId pred, NodeId target, double eps) {
  const Matrix& p = t.value(pred);
  const Matrix& tg = t.value(target);
  require(p.rows() == tg.rows() && p.cols() == tg.cols(), "cosine_distance_sum shapes");
  if (t.requires_grad(target)) {
    throw ShapeMismatch("cosine_distance_sum target must be a stop-gradient constant");
  }
  Node n;
  n.op = Op::kCosineDistSum;
  n.in = {pred, target, -1};
  n.x0 = eps;
  double acc = 0.0;
  for (int r = 0; r < p.rows(); ++r) {
    acc += cosine_distance(p.row(r).transpose(), tg.row(r).transpose(), eps);
  }
  n.out.resize(1, 1);
  n.out(0, 0) = acc;
  return t.emit(std::move(n));
}

double grad_check(
    const std::function<NodeId(Tape&, const std::vector<NodeId>&)>& build,
    std::vector<Matrix>& params, double step) {
  // Analytic pass.
  std::vector<Matrix> analytic;
  {
    Tape tape;
    std::vector<NodeId> ids;
    ids.reserve(params.size());
    for (Matrix& p : params) ids.push_back(tape.parameter(&p, true));
    NodeId loss = build(tape, ids);
    tape.backward(loss);
    for (NodeId id : ids) analytic.push_back(tape.gradient(id));
  }
  auto eval = [&]() {
    Tape tape;
    std::vector<NodeId> ids;
    ids.reserve(params.size());
    for (Matrix& p : params) ids.push_back(tape.parameter(&p, false));
    return tape.value(build(tape, ids))(0, 0);
  };
  double worst = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Matrix& p = params[pi];
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double orig = p.data()[i];
      p.data()[i] = orig + step;
      const double up = eval();
      p.data()[i] = orig - step;
      const double down = eval();
      p.data()[i] = orig;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[pi].data()[i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-12});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace sbncl::diff
