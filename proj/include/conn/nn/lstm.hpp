#pragma once

#include <cmath>
#include <stdexcept>

#include "conn/core/rng.hpp"
#include "conn/nn/tensor.hpp"

namespace conn::nn {

/// Activations recorded by one LSTM pass, needed for back-propagation.
/// Column s of `gates` holds the post-activation (i, f, g, o) of step s;
/// `cells`/`hidden` have T+1 columns with the initial state in column 0.
template <typename T>
struct LstmTrace {
  Matrix<T> gates;
  Matrix<T> cells;
  Matrix<T> hidden;
  bool reversed = false;
};

/// Single-direction LSTM. Gate rows are stacked as [input; forget; cell; output].
template <typename T>
class Lstm {
 public:
  Lstm() = default;
  Lstm(const std::string& name, Index input_dim, Index hidden)
      : w_in(name + ".w_in", 4 * hidden, input_dim),
        w_rec(name + ".w_rec", 4 * hidden, hidden),
        bias(name + ".bias", 4 * hidden, 1) {}

  Parameter<T> w_in;
  Parameter<T> w_rec;
  Parameter<T> bias;

  Index input_dim() const { return w_in.value.cols(); }
  Index hidden() const { return w_rec.value.cols(); }

  /// Weights ~ U(-1/sqrt(H), 1/sqrt(H)); biases zero except forget gate = 1.
  void init(Rng& rng) {
    const double r = 1.0 / std::sqrt(static_cast<double>(hidden()));
    for (auto* p : {&w_in, &w_rec})
      for (Index i = 0; i < p->value.size(); ++i) p->value.data()[i] = static_cast<T>(rng.uniform(-r, r));
    bias.value.setZero();
    bias.value.block(hidden(), 0, hidden(), 1).setConstant(T(1));
  }

  ParameterList<T> parameters() { return {&w_in, &w_rec, &bias}; }

  /// Runs over the columns of `seq` (d_in x T), right to left when `reversed`.
  void forward(const Matrix<T>& seq, bool reversed, const Vector<T>& h0, const Vector<T>& c0, LstmTrace<T>& tr) const {
    const Index steps = seq.cols();
    const Index H = hidden();
    if (steps == 0) throw std::invalid_argument("empty sequence");
    if (seq.rows() != input_dim()) throw std::invalid_argument("lstm input dimension mismatch");
    tr.reversed = reversed;
    tr.gates.resize(4 * H, steps);
    tr.cells.resize(H, steps + 1);
    tr.hidden.resize(H, steps + 1);
    tr.cells.col(0) = c0;
    tr.hidden.col(0) = h0;

    const Matrix<T> projected = (w_in.value * seq).colwise() + bias.value.col(0);
    Vector<T> z(4 * H);
    for (Index s = 0; s < steps; ++s) {
      const Index t = reversed ? steps - 1 - s : s;
      z.noalias() = projected.col(t) + w_rec.value * tr.hidden.col(s);
      for (Index k = 0; k < H; ++k) {
        z(k) = sigmoid(z(k));
        z(H + k) = sigmoid(z(H + k));
        z(2 * H + k) = std::tanh(z(2 * H + k));
        z(3 * H + k) = sigmoid(z(3 * H + k));
      }
      tr.gates.col(s) = z;
      tr.cells.col(s + 1) = z.segment(H, H).cwiseProduct(tr.cells.col(s)) + z.head(H).cwiseProduct(z.segment(2 * H, H));
      tr.hidden.col(s + 1) = z.tail(H).cwiseProduct(tr.cells.col(s + 1).array().tanh().matrix());
    }
  }

  /// Back-propagates gradients on the final hidden/cell state. Accumulates into
  /// parameter grads; adds to `d_seq` when non-null; writes initial-state
  /// gradients to `d_h0`/`d_c0` when non-null.
  void backward(const Matrix<T>& seq, const LstmTrace<T>& tr, const Vector<T>& d_h_final, const Vector<T>& d_c_final,
                Matrix<T>* d_seq, Vector<T>* d_h0, Vector<T>* d_c0) {
    const Index steps = seq.cols();
    const Index H = hidden();
    Matrix<T> dz(4 * H, steps);
    Vector<T> dh = d_h_final;
    Vector<T> dc = d_c_final;
    for (Index s = steps - 1; s >= 0; --s) {
      const auto g = tr.gates.col(s);
      const auto i_g = g.head(H).array();
      const auto f_g = g.segment(H, H).array();
      const auto c_g = g.segment(2 * H, H).array();
      const auto o_g = g.tail(H).array();
      const auto c_prev = tr.cells.col(s).array();
      const Eigen::Array<T, Eigen::Dynamic, 1> tanh_c = tr.cells.col(s + 1).array().tanh();

      dc.array() += dh.array() * o_g * (T(1) - tanh_c.square());
      dz.col(s).head(H) = (dc.array() * c_g * i_g * (T(1) - i_g)).matrix();
      dz.col(s).segment(H, H) = (dc.array() * c_prev * f_g * (T(1) - f_g)).matrix();
      dz.col(s).segment(2 * H, H) = (dc.array() * i_g * (T(1) - c_g.square())).matrix();
      dz.col(s).tail(H) = (dh.array() * tanh_c * o_g * (T(1) - o_g)).matrix();

      dc = (dc.array() * f_g).matrix();
      dh.noalias() = w_rec.value.transpose() * dz.col(s);
    }
    // dz columns are in processing order; map them back to sequence order.
    Matrix<T> dz_seq(4 * H, steps);
    for (Index s = 0; s < steps; ++s) dz_seq.col(tr.reversed ? steps - 1 - s : s) = dz.col(s);

    w_in.grad.noalias() += dz_seq * seq.transpose();
    w_rec.grad.noalias() += dz * tr.hidden.leftCols(steps).transpose();
    bias.grad.col(0) += dz.rowwise().sum();
    if (d_seq) d_seq->noalias() += w_in.value.transpose() * dz_seq;
    if (d_h0) *d_h0 = dh;
    if (d_c0) *d_c0 = dc;
  }
};

/// Bidirectional LSTM summarizing a sequence by [h_fwd(T); h_bwd(1)] (2H).
template <typename T>
class BiLstm {
 public:
  struct Trace {
    LstmTrace<T> fwd;
    LstmTrace<T> bwd;
  };

  BiLstm() = default;
  BiLstm(const std::string& name, Index input_dim, Index hidden)
      : fwd(name + ".fwd", input_dim, hidden), bwd(name + ".bwd", input_dim, hidden) {}

  Lstm<T> fwd;
  Lstm<T> bwd;

  Index hidden() const { return fwd.hidden(); }
  Index input_dim() const { return fwd.input_dim(); }
  Index output_dim() const { return 2 * hidden(); }

  void init(Rng& rng) {
    fwd.init(rng);
    bwd.init(rng);
  }

  ParameterList<T> parameters() {
    ParameterList<T> out = fwd.parameters();
    for (auto* p : bwd.parameters()) out.push_back(p);
    return out;
  }

  /// `init_cells` (2H, optional): initial cell states [c_fwd; c_bwd].
  Vector<T> forward(const Matrix<T>& seq, Trace& tr, const Vector<T>* init_cells = nullptr) const {
    const Index H = hidden();
    const Vector<T> zero = Vector<T>::Zero(H);
    fwd.forward(seq, false, zero, init_cells ? Vector<T>(init_cells->head(H)) : zero, tr.fwd);
    bwd.forward(seq, true, zero, init_cells ? Vector<T>(init_cells->tail(H)) : zero, tr.bwd);
    return final_hidden(tr);
  }

  static Vector<T> final_hidden(const Trace& tr) {
    const Index H = tr.fwd.hidden.rows();
    Vector<T> out(2 * H);
    out << tr.fwd.hidden.col(tr.fwd.hidden.cols() - 1), tr.bwd.hidden.col(tr.bwd.hidden.cols() - 1);
    return out;
  }

  static Vector<T> final_cells(const Trace& tr) {
    const Index H = tr.fwd.cells.rows();
    Vector<T> out(2 * H);
    out << tr.fwd.cells.col(tr.fwd.cells.cols() - 1), tr.bwd.cells.col(tr.bwd.cells.cols() - 1);
    return out;
  }

  /// `d_out` is the gradient on final_hidden; `d_final_cells` (optional) the
  /// gradient on final_cells. `d_init_cells` receives the gradient on the
  /// initial cell states.
  void backward(const Matrix<T>& seq, const Trace& tr, const Vector<T>& d_out, const Vector<T>* d_final_cells,
                Matrix<T>* d_seq, Vector<T>* d_init_cells) {
    const Index H = hidden();
    const Vector<T> zero = Vector<T>::Zero(H);
    Vector<T> dc0_f;
    Vector<T> dc0_b;
    fwd.backward(seq, tr.fwd, d_out.head(H), d_final_cells ? Vector<T>(d_final_cells->head(H)) : zero, d_seq, nullptr,
                 &dc0_f);
    bwd.backward(seq, tr.bwd, d_out.tail(H), d_final_cells ? Vector<T>(d_final_cells->tail(H)) : zero, d_seq, nullptr,
                 &dc0_b);
    if (d_init_cells) {
      d_init_cells->resize(2 * H);
      *d_init_cells << dc0_f, dc0_b;
    }
  }
};

}  // namespace conn::nn
