#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "thermo/core/conv.hpp"
#include "thermo/core/ops.hpp"
#include "thermo/core/resample.hpp"
#include "thermo/core/tensor.hpp"
#include "thermo/metrics/ssim_kernel.hpp"

namespace thermo {

/// Tape-based reverse-mode differentiation over the feature-map op set.
///
/// Nodes are appended in evaluation order, so walking the tape backwards
/// is a valid topological order. A graph built with record = false only
/// evaluates values (inference).
template <typename T>
class Graph {
 public:
  struct Var {
    std::size_t id = std::numeric_limits<std::size_t>::max();
  };

  explicit Graph(bool record = true) : record_(record) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool recording() const { return record_; }

  Var constant(Tensor<T> v) { return push(std::move(v), false, {}); }
  Var parameter(Tensor<T> v) { return push(std::move(v), record_, {}); }

  const Tensor<T>& value(Var v) const { return nodes_.at(v.id).value; }
  const Tensor<T>& grad(Var v) const { return nodes_.at(v.id).grad; }
  bool has_grad(Var v) const { return !nodes_.at(v.id).grad.empty(); }

  void backward(Var loss) {
    require(record_, "backward: graph was built without recording");
    require(value(loss).size() == 1, "backward: loss must be a scalar");
    for (auto& n : nodes_) n.grad = Tensor<T>();
    Node& root = nodes_[loss.id];
    if (!root.needs_grad) return;
    root.grad = Tensor<T>(root.value.shape(), T{1});
    for (std::size_t i = loss.id + 1; i-- > 0;) {
      Node& n = nodes_[i];
      if (n.back && !n.grad.empty()) n.back();
    }
  }

  // ---- ops -------------------------------------------------------------

  Var conv2d(Var x, Var w, Var b, std::size_t padding) {
    Tensor<T> out = thermo::conv2d(value(x), value(w), value(b), padding);
    return push(std::move(out), any_grad({x, w, b}), [this, x, w, b, padding, id = next_id()] {
      const Tensor<T>& g = nodes_[id].grad;
      if (needs(x)) accumulate(x, conv2d_grad_input(g, value(w), padding, value(x).height(), value(x).width()));
      if (needs(w) || needs(b)) {
        Tensor<T> gw(value(w).shape());
        Tensor<T> gb(value(b).shape());
        conv2d_grad_params(value(x), g, padding, gw, gb);
        if (needs(w)) accumulate(w, std::move(gw));
        if (needs(b)) accumulate(b, std::move(gb));
      }
    });
  }

  Var leaky_relu(Var x, T slope) {
    return push(thermo::leaky_relu(value(x), slope), any_grad({x}), [this, x, slope, id = next_id()] {
      const Tensor<T>& g = nodes_[id].grad;
      const Tensor<T>& in = value(x);
      Tensor<T> gx(in.shape());
      for (std::size_t i = 0; i < in.size(); ++i) gx[i] = in[i] >= T{0} ? g[i] : slope * g[i];
      accumulate(x, std::move(gx));
    });
  }

  Var softplus(Var x) {
    const Tensor<T>& in = value(x);
    Tensor<T> out(in.shape());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = softplus_value(in[i]);
    return push(std::move(out), any_grad({x}), [this, x, id = next_id()] {
      const Tensor<T>& g = nodes_[id].grad;
      const Tensor<T>& in2 = value(x);
      Tensor<T> gx(in2.shape());
      for (std::size_t i = 0; i < in2.size(); ++i) gx[i] = g[i] / (T{1} + std::exp(-in2[i]));
      accumulate(x, std::move(gx));
    });
  }

  Var pixel_shuffle(Var x, std::size_t s) {
    return push(thermo::pixel_shuffle(value(x), s), any_grad({x}), [this, x, s, id = next_id()] {
      accumulate(x, pixel_unshuffle(nodes_[id].grad, s));
    });
  }

  Var concat(Var a, Var b) {
    return push(concat_channels(value(a), value(b)), any_grad({a, b}), [this, a, b, id = next_id()] {
      const Tensor<T>& g = nodes_[id].grad;
      const std::size_t ca = value(a).channels();
      if (needs(a)) accumulate(a, slice_channels(g, 0, ca));
      if (needs(b)) accumulate(b, slice_channels(g, ca, g.channels() - ca));
    });
  }

  Var slice(Var x, std::size_t begin, std::size_t count) {
    return push(slice_channels(value(x), begin, count), any_grad({x}), [this, x, begin, count, id = next_id()] {
      const Tensor<T>& g = nodes_[id].grad;
      Tensor<T> gx(value(x).shape());
      std::copy(g.values().begin(), g.values().end(), gx.data() + begin * gx.plane_size());
      accumulate(x, std::move(gx));
    });
  }

  Var add(Var a, Var b) {
    return binary(a, b, [](T u, T v) { return u + v; },
                  [](T, T) { return T{1}; }, [](T, T) { return T{1}; });
  }
  Var sub(Var a, Var b) {
    return binary(a, b, [](T u, T v) { return u - v; },
                  [](T, T) { return T{1}; }, [](T, T) { return T{-1}; });
  }
  Var mul(Var a, Var b) {
    return binary(a, b, [](T u, T v) { return u * v; },
                  [](T, T v) { return v; }, [](T u, T) { return u; });
  }
  Var div(Var a, Var b) {
    return binary(a, b, [](T u, T v) { return u / v; },
                  [](T, T v) { return T{1} / v; }, [](T u, T v) { return -u / (v * v); });
  }

  // scale * x + shift with constant coefficients.
  Var affine(Var x, T scale, T shift) {
    Tensor<T> out = value(x);
    for (T& v : out.values()) v = scale * v + shift;
    return push(std::move(out), any_grad({x}), [this, x, scale, id = next_id()] {
      Tensor<T> gx = nodes_[id].grad;
      for (T& v : gx.values()) v *= scale;
      accumulate(x, std::move(gx));
    });
  }

  // Repeats a one-element tensor into a 1 x h x w map.
  Var broadcast(Var scalar, std::size_t h, std::size_t w) {
    require(value(scalar).size() == 1, "broadcast: operand must hold one value");
    Tensor<T> out = Tensor<T>::chw(1, h, w, value(scalar)[0]);
    return push(std::move(out), any_grad({scalar}), [this, scalar, id = next_id()] {
      double s = 0.0;
      for (T v : nodes_[id].grad.values()) s += static_cast<double>(v);
      accumulate(scalar, Tensor<T>(value(scalar).shape(), static_cast<T>(s)));
    });
  }

  Var bicubic(Var x, Ratio factor) {
    return push(bicubic_resample(value(x), factor), any_grad({x}), [this, x, factor, id = next_id()] {
      accumulate(x, bicubic_resample_adjoint(nodes_[id].grad, factor, value(x).height(), value(x).width()));
    });
  }

  // Softmax across channels independently at every pixel.
  Var softmax_channels(Var x) {
    const Tensor<T>& in = value(x);
    const std::size_t c = in.channels();
    const std::size_t p = in.plane_size();
    Tensor<T> out(in.shape());
    for (std::size_t i = 0; i < p; ++i) {
      T mx = in[i];
      for (std::size_t k = 1; k < c; ++k) mx = std::max(mx, in[k * p + i]);
      double sum = 0.0;
      for (std::size_t k = 0; k < c; ++k) sum += std::exp(static_cast<double>(in[k * p + i] - mx));
      for (std::size_t k = 0; k < c; ++k)
        out[k * p + i] = static_cast<T>(std::exp(static_cast<double>(in[k * p + i] - mx)) / sum);
    }
    return push(std::move(out), any_grad({x}), [this, x, c, p, id = next_id()] {
      const Tensor<T>& g = nodes_[id].grad;
      const Tensor<T>& y = nodes_[id].value;
      Tensor<T> gx(y.shape());
      for (std::size_t i = 0; i < p; ++i) {
        double dot = 0.0;
        for (std::size_t k = 0; k < c; ++k) dot += static_cast<double>(y[k * p + i]) * g[k * p + i];
        for (std::size_t k = 0; k < c; ++k)
          gx[k * p + i] = static_cast<T>(static_cast<double>(y[k * p + i]) * (g[k * p + i] - dot));
      }
      accumulate(x, std::move(gx));
    });
  }

  // out[p] = sum_f sum_t weights[f*k*k + t, p] * frames[f, clamp(p + tap_t)],
  // taps over a k x k neighborhood centered on p, edge clamped.
  Var kernel_fuse(Var weights, const Tensor<T>& frames, std::size_t k) {
    const Tensor<T>& wv = value(weights);
    const std::size_t n = frames.channels();
    const std::size_t h = frames.height();
    const std::size_t w = frames.width();
    require(k % 2 == 1, "kernel_fuse: kernel size must be odd");
    require(wv.channels() == n * k * k && wv.height() == h && wv.width() == w, "kernel_fuse: weight shape mismatch");
    Tensor<T> out = Tensor<T>::chw(1, h, w);
    for_each_tap(n, h, w, k, [&](std::size_t ch, std::size_t pix, std::size_t src_f, std::size_t src) {
      out[pix] += wv[ch * h * w + pix] * frames[src_f * h * w + src];
    });
    return push(std::move(out), any_grad({weights}), [this, weights, frames, k, n, h, w, id = next_id()] {
      const Tensor<T>& g = nodes_[id].grad;
      Tensor<T> gw(value(weights).shape());
      for_each_tap(n, h, w, k, [&](std::size_t ch, std::size_t pix, std::size_t src_f, std::size_t src) {
        gw[ch * h * w + pix] = g[pix] * frames[src_f * h * w + src];
      });
      accumulate(weights, std::move(gw));
    });
  }

  // Mean absolute error against a constant target.
  Var mae(Var x, const Tensor<T>& target) {
    const Tensor<T>& in = value(x);
    require(in.shape() == target.shape(), "mae: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) s += std::abs(static_cast<double>(in[i]) - target[i]);
    const double n = static_cast<double>(in.size());
    return push(Tensor<T>::scalar(static_cast<T>(s / n)), any_grad({x}), [this, x, target, n, id = next_id()] {
      const T g0 = nodes_[id].grad[0];
      const Tensor<T>& in2 = value(x);
      Tensor<T> gx(in2.shape());
      for (std::size_t i = 0; i < in2.size(); ++i) {
        const T d = in2[i] - target[i];
        gx[i] = d > T{0} ? g0 / static_cast<T>(n) : (d < T{0} ? -g0 / static_cast<T>(n) : T{0});
      }
      accumulate(x, std::move(gx));
    });
  }

  // (1 - mean SSIM) / 2 against a constant target, single-channel maps.
  Var ssim_loss(Var x, const Tensor<T>& target, const SsimParams& params) {
    const Tensor<T>& in = value(x);
    require(in.shape() == target.shape() && in.channels() == 1, "ssim_loss: need matching 1-channel maps");
    std::vector<double> a(in.values().begin(), in.values().end());
    std::vector<double> b(target.values().begin(), target.values().end());
    const bool want = any_grad({x});
    std::vector<double> ga(want ? a.size() : 0);
    const double s = ssim_valid(a, b, in.height(), in.width(), params, ga);
    return push(Tensor<T>::scalar(static_cast<T>((1.0 - s) / 2.0)), want, [this, x, ga, id = next_id()] {
      const double g0 = static_cast<double>(nodes_[id].grad[0]);
      Tensor<T> gx(value(x).shape());
      for (std::size_t i = 0; i < ga.size(); ++i) gx[i] = static_cast<T>(-0.5 * g0 * ga[i]);
      accumulate(x, std::move(gx));
    });
  }

  static T softplus_value(T v) {
    return v > T{20} ? v : static_cast<T>(std::log1p(std::exp(static_cast<double>(v))));
  }

 private:
  struct Node {
    Tensor<T> value;
    Tensor<T> grad;
    bool needs_grad = false;
    std::function<void()> back;
  };

  std::size_t next_id() const { return nodes_.size(); }
  bool needs(Var v) const { return nodes_[v.id].needs_grad; }

  bool any_grad(std::initializer_list<Var> vars) const {
    if (!record_) return false;
    return std::any_of(vars.begin(), vars.end(), [this](Var v) { return nodes_.at(v.id).needs_grad; });
  }

  Var push(Tensor<T> value, bool needs_grad, std::function<void()> back) {
    Node n;
    n.value = std::move(value);
    n.needs_grad = needs_grad;
    if (needs_grad) n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return Var{nodes_.size() - 1};
  }

  void accumulate(Var v, Tensor<T> g) {
    Node& n = nodes_[v.id];
    if (!n.needs_grad) return;
    if (n.grad.empty()) {
      n.grad = std::move(g);
      return;
    }
    for (std::size_t i = 0; i < g.size(); ++i) n.grad[i] += g[i];
  }

  template <typename F, typename Da, typename Db>
  Var binary(Var a, Var b, F f, Da da, Db db) {
    const Tensor<T>& u = value(a);
    const Tensor<T>& v = value(b);
    require(u.shape() == v.shape(), "elementwise op: shape mismatch " + shape_string(u.shape()) + " vs " +
                                        shape_string(v.shape()));
    Tensor<T> out(u.shape());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = f(u[i], v[i]);
    return push(std::move(out), any_grad({a, b}), [this, a, b, da, db, id = next_id()] {
      const Tensor<T>& g = nodes_[id].grad;
      const Tensor<T>& u2 = value(a);
      const Tensor<T>& v2 = value(b);
      if (needs(a)) {
        Tensor<T> ga(u2.shape());
        for (std::size_t i = 0; i < u2.size(); ++i) ga[i] = g[i] * da(u2[i], v2[i]);
        accumulate(a, std::move(ga));
      }
      if (needs(b)) {
        Tensor<T> gb(v2.shape());
        for (std::size_t i = 0; i < v2.size(); ++i) gb[i] = g[i] * db(u2[i], v2[i]);
        accumulate(b, std::move(gb));
      }
    });
  }

  template <typename F>
  static void for_each_tap(std::size_t n, std::size_t h, std::size_t w, std::size_t k, F&& f) {
    const long r = static_cast<long>(k / 2);
    for (std::size_t fr = 0; fr < n; ++fr)
      for (std::size_t t = 0; t < k * k; ++t) {
        const long dy = static_cast<long>(t / k) - r;
        const long dx = static_cast<long>(t % k) - r;
        const std::size_t ch = fr * k * k + t;
        for (std::size_t y = 0; y < h; ++y) {
          const auto sy = static_cast<std::size_t>(std::clamp(static_cast<long>(y) + dy, 0L, static_cast<long>(h) - 1));
          for (std::size_t x = 0; x < w; ++x) {
            const auto sx =
                static_cast<std::size_t>(std::clamp(static_cast<long>(x) + dx, 0L, static_cast<long>(w) - 1));
            f(ch, y * w + x, fr, sy * w + sx);
          }
        }
      }
  }

  bool record_;
  std::vector<Node> nodes_;
};

}  // namespace thermo
