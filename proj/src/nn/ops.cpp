#include "roboswap/nn/ops.hpp"

#include <cmath>

#include "roboswap/core/kernels.hpp"

namespace roboswap::nn {

namespace {

kernels::Conv2dDims conv_dims(const Tensor& x, const Tensor& w, int stride, int pad) {
  if (x.ndim() != 4 || w.ndim() != 4) throw InvalidArgument("conv2d: need 4-d input and weight");
  if (x.dim(1) != w.dim(1)) throw InvalidArgument("conv2d: channel mismatch");
  kernels::Conv2dDims d;
  d.n = x.dim(0);
  d.cin = x.dim(1);
  d.h = x.dim(2);
  d.w = x.dim(3);
  d.cout = w.dim(0);
  d.kh = w.dim(2);
  d.kw = w.dim(3);
  d.stride = stride;
  d.pad = pad;
  d.finalize();
  if (d.ho <= 0 || d.wo <= 0) throw InvalidArgument("conv2d: output would be empty");
  return d;
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor* b, int stride, int pad) {
  const auto d = conv_dims(x, w, stride, pad);
  Tensor y({d.n, d.cout, d.ho, d.wo});
  kernels::conv2d_forward(d, x.data(), w.data(), b ? b->data() : nullptr, y.data());
  return y;
}

void conv2d_backward(const Tensor& x, const Tensor& w, int stride, int pad, const Tensor& gy,
                     Tensor* gx, Tensor* gw, Tensor* gb) {
  const auto d = conv_dims(x, w, stride, pad);
  if (gx) {
    *gx = Tensor(x.shape());
    kernels::conv2d_grad_input(d, w.data(), gy.data(), gx->data());
  }
  if (gw) kernels::conv2d_grad_weight(d, x.data(), gy.data(), gw->data(), gb ? gb->data() : nullptr);
}

Tensor conv1d_time(const Tensor& x, const Tensor& w, const Tensor* b) {
  const int n = x.dim(0), cin = x.dim(1), hw = x.dim(2) * x.dim(3);
  const int cout = w.dim(0), k = w.dim(2);
  if (w.dim(1) != cin) throw InvalidArgument("conv1d_time: channel mismatch");
  Tensor y({n, cout, x.dim(2), x.dim(3)});
  kernels::conv1d_time_forward(n, cin, cout, hw, k, x.data(), w.data(), b ? b->data() : nullptr,
                               y.data());
  return y;
}

void conv1d_time_backward(const Tensor& x, const Tensor& w, const Tensor& gy, Tensor* gx,
                          Tensor* gw, Tensor* gb) {
  const int n = x.dim(0), cin = x.dim(1), hw = x.dim(2) * x.dim(3);
  const int cout = w.dim(0), k = w.dim(2);
  if (gx) {
    *gx = Tensor(x.shape());
    kernels::conv1d_time_grad_input(n, cin, cout, hw, k, w.data(), gy.data(), gx->data());
  }
  if (gw)
    kernels::conv1d_time_grad_weight(n, cin, cout, hw, k, x.data(), gy.data(), gw->data(),
                                     gb ? gb->data() : nullptr);
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor* b) {
  const int n = x.dim(0), in = x.dim(1), out = w.dim(0);
  if (w.dim(1) != in) throw InvalidArgument("linear: dimension mismatch");
  Tensor y({n, out});
  for (int i = 0; i < n; ++i) {
    for (int o = 0; o < out; ++o) {
      float acc = b ? (*b)[o] : 0.0f;
      const float* xr = x.data() + static_cast<int64_t>(i) * in;
      const float* wr = w.data() + static_cast<int64_t>(o) * in;
      for (int j = 0; j < in; ++j) acc += xr[j] * wr[j];
      y.at2(i, o) = acc;
    }
  }
  return y;
}

void linear_backward(const Tensor& x, const Tensor& w, const Tensor& gy, Tensor* gx, Tensor* gw,
                     Tensor* gb) {
  const int n = x.dim(0), in = x.dim(1), out = w.dim(0);
  if (gx) {
    *gx = Tensor({n, in});
    for (int i = 0; i < n; ++i)
      for (int o = 0; o < out; ++o) {
        const float g = gy.at2(i, o);
        const float* wr = w.data() + static_cast<int64_t>(o) * in;
        float* gr = gx->data() + static_cast<int64_t>(i) * in;
        for (int j = 0; j < in; ++j) gr[j] += g * wr[j];
      }
  }
  if (gw) {
    for (int o = 0; o < out; ++o)
      for (int i = 0; i < n; ++i) {
        const float g = gy.at2(i, o);
        const float* xr = x.data() + static_cast<int64_t>(i) * in;
        float* gr = gw->data() + static_cast<int64_t>(o) * in;
        for (int j = 0; j < in; ++j) gr[j] += g * xr[j];
      }
  }
  if (gb) {
    for (int o = 0; o < out; ++o) {
      float acc = 0.0f;
      for (int i = 0; i < n; ++i) acc += gy.at2(i, o);
      (*gb)[o] += acc;
    }
  }
}

Tensor instance_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                     InstanceNormCache* cache, float eps) {
  const int n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
  Tensor y(x.shape());
  Tensor xhat(x.shape());
  Tensor inv_std({n, c});
  for (int i = 0; i < n; ++i) {
    for (int ch = 0; ch < c; ++ch) {
      const float* xp = x.data() + (static_cast<int64_t>(i) * c + ch) * hw;
      double mean = 0.0;
      for (int p = 0; p < hw; ++p) mean += xp[p];
      mean /= hw;
      double var = 0.0;
      for (int p = 0; p < hw; ++p) {
        const double d = xp[p] - mean;
        var += d * d;
      }
      var /= hw;
      const float inv = 1.0f / std::sqrt(static_cast<float>(var) + eps);
      inv_std.at2(i, ch) = inv;
      float* xh = xhat.data() + (static_cast<int64_t>(i) * c + ch) * hw;
      float* yp = y.data() + (static_cast<int64_t>(i) * c + ch) * hw;
      const float g = gamma[ch], b = beta[ch];
      const float m = static_cast<float>(mean);
      for (int p = 0; p < hw; ++p) {
        xh[p] = (xp[p] - m) * inv;
        yp[p] = g * xh[p] + b;
      }
    }
  }
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

void instance_norm_backward(const InstanceNormCache& cache, const Tensor& gamma, const Tensor& gy,
                            Tensor* gx, Tensor* ggamma, Tensor* gbeta) {
  const Tensor& xhat = cache.xhat;
  const int n = xhat.dim(0), c = xhat.dim(1), hw = xhat.dim(2) * xhat.dim(3);
  if (gx) *gx = Tensor(xhat.shape());
  for (int i = 0; i < n; ++i) {
    for (int ch = 0; ch < c; ++ch) {
      const float* xh = xhat.data() + (static_cast<int64_t>(i) * c + ch) * hw;
      const float* gp = gy.data() + (static_cast<int64_t>(i) * c + ch) * hw;
      double sum_g = 0.0, sum_gx = 0.0;
      for (int p = 0; p < hw; ++p) {
        sum_g += gp[p];
        sum_gx += static_cast<double>(gp[p]) * xh[p];
      }
      if (ggamma) (*ggamma)[ch] += static_cast<float>(sum_gx);
      if (gbeta) (*gbeta)[ch] += static_cast<float>(sum_g);
      if (gx) {
        const float g = gamma[ch];
        const float inv = cache.inv_std.at2(i, ch);
        const float mg = static_cast<float>(sum_g / hw);
        const float mgx = static_cast<float>(sum_gx / hw);
        float* gxp = gx->data() + (static_cast<int64_t>(i) * c + ch) * hw;
        for (int p = 0; p < hw; ++p) gxp[p] = inv * g * (gp[p] - mg - xh[p] * mgx);
      }
    }
  }
}

Tensor relu(const Tensor& x) {
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
  return y;
}
void relu_backward(const Tensor& x, const Tensor& gy, Tensor* gx) {
  *gx = Tensor(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) (*gx)[i] = x[i] > 0.0f ? gy[i] : 0.0f;
}

Tensor leaky_relu(const Tensor& x, float slope) {
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) y[i] = x[i] > 0.0f ? x[i] : slope * x[i];
  return y;
}
void leaky_relu_backward(const Tensor& x, float slope, const Tensor& gy, Tensor* gx) {
  *gx = Tensor(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) (*gx)[i] = x[i] > 0.0f ? gy[i] : slope * gy[i];
}

Tensor tanh_act(const Tensor& x) {
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) y[i] = std::tanh(x[i]);
  return y;
}
void tanh_backward(const Tensor& y, const Tensor& gy, Tensor* gx) {
  *gx = Tensor(y.shape());
  for (int64_t i = 0; i < y.numel(); ++i) (*gx)[i] = gy[i] * (1.0f - y[i] * y[i]);
}

Tensor sigmoid(const Tensor& x) {
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) y[i] = 1.0f / (1.0f + std::exp(-x[i]));
  return y;
}
void sigmoid_backward(const Tensor& y, const Tensor& gy, Tensor* gx) {
  *gx = Tensor(y.shape());
  for (int64_t i = 0; i < y.numel(); ++i) (*gx)[i] = gy[i] * y[i] * (1.0f - y[i]);
}

Tensor silu(const Tensor& x) {
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) {
    const float s = 1.0f / (1.0f + std::exp(-x[i]));
    y[i] = x[i] * s;
  }
  return y;
}
void silu_backward(const Tensor& x, const Tensor& gy, Tensor* gx) {
  *gx = Tensor(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) {
    const float s = 1.0f / (1.0f + std::exp(-x[i]));
    (*gx)[i] = gy[i] * (s + x[i] * s * (1.0f - s));
  }
}

Tensor upsample2x_nearest(const Tensor& x) {
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  Tensor y({n, c, h * 2, w * 2});
  for (int i = 0; i < n; ++i)
    for (int ch = 0; ch < c; ++ch)
      for (int yy = 0; yy < h * 2; ++yy)
        for (int xx = 0; xx < w * 2; ++xx)
          y.at4(i, ch, yy, xx) = x.at4(i, ch, yy / 2, xx / 2);
  return y;
}
void upsample2x_nearest_backward(const Tensor& gy, Tensor* gx) {
  const int n = gy.dim(0), c = gy.dim(1), h2 = gy.dim(2), w2 = gy.dim(3);
  *gx = Tensor({n, c, h2 / 2, w2 / 2});
  for (int i = 0; i < n; ++i)
    for (int ch = 0; ch < c; ++ch)
      for (int yy = 0; yy < h2; ++yy)
        for (int xx = 0; xx < w2; ++xx) gx->at4(i, ch, yy / 2, xx / 2) += gy.at4(i, ch, yy, xx);
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.dim(0) != b.dim(0) || a.dim(2) != b.dim(2) || a.dim(3) != b.dim(3))
    throw InvalidArgument("concat_channels: incompatible shapes");
  const int n = a.dim(0), ca = a.dim(1), cb = b.dim(1), h = a.dim(2), w = a.dim(3);
  Tensor y({n, ca + cb, h, w});
  const int64_t hw = static_cast<int64_t>(h) * w;
  for (int i = 0; i < n; ++i) {
    std::copy(a.data() + i * ca * hw, a.data() + (i + 1) * ca * hw,
              y.data() + static_cast<int64_t>(i) * (ca + cb) * hw);
    std::copy(b.data() + i * cb * hw, b.data() + (i + 1) * cb * hw,
              y.data() + static_cast<int64_t>(i) * (ca + cb) * hw + ca * hw);
  }
  return y;
}

void split_channels_grad(const Tensor& g, int ca, Tensor* ga, Tensor* gb) {
  const int n = g.dim(0), c = g.dim(1), h = g.dim(2), w = g.dim(3);
  const int cb = c - ca;
  const int64_t hw = static_cast<int64_t>(h) * w;
  if (ga) *ga = Tensor({n, ca, h, w});
  if (gb) *gb = Tensor({n, cb, h, w});
  for (int i = 0; i < n; ++i) {
    if (ga)
      std::copy(g.data() + static_cast<int64_t>(i) * c * hw,
                g.data() + static_cast<int64_t>(i) * c * hw + ca * hw,
                ga->data() + static_cast<int64_t>(i) * ca * hw);
    if (gb)
      std::copy(g.data() + static_cast<int64_t>(i) * c * hw + ca * hw,
                g.data() + static_cast<int64_t>(i + 1) * c * hw,
                gb->data() + static_cast<int64_t>(i) * cb * hw);
  }
}

Tensor global_avg_pool(const Tensor& x) {
  const int n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
  Tensor y({n, c});
  for (int i = 0; i < n; ++i)
    for (int ch = 0; ch < c; ++ch) {
      double acc = 0.0;
      const float* xp = x.data() + (static_cast<int64_t>(i) * c + ch) * hw;
      for (int p = 0; p < hw; ++p) acc += xp[p];
      y.at2(i, ch) = static_cast<float>(acc / hw);
    }
  return y;
}
void global_avg_pool_backward(const Tensor& gy, int h, int w, Tensor* gx) {
  const int n = gy.dim(0), c = gy.dim(1), hw = h * w;
  *gx = Tensor({n, c, h, w});
  for (int i = 0; i < n; ++i)
    for (int ch = 0; ch < c; ++ch) {
      const float g = gy.at2(i, ch) / hw;
      float* gp = gx->data() + (static_cast<int64_t>(i) * c + ch) * hw;
      for (int p = 0; p < hw; ++p) gp[p] = g;
    }
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor y(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) y[i] = a[i] + b[i];
  return y;
}
void add_inplace(Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add_inplace");
  for (int64_t i = 0; i < a.numel(); ++i) a[i] += b[i];
}
void scale_inplace(Tensor& a, float s) {
  for (int64_t i = 0; i < a.numel(); ++i) a[i] *= s;
}
Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Tensor y(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) y[i] = a[i] * b[i];
  return y;
}

double mse(const Tensor& pred, const Tensor& target) {
  require_same_shape(pred, target, "mse");
  double acc = 0.0;
  for (int64_t i = 0; i < pred.numel(); ++i) {
    const double d = static_cast<double>(pred[i]) - target[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.numel());
}

Tensor mse_grad(const Tensor& pred, const Tensor& target) {
  require_same_shape(pred, target, "mse_grad");
  Tensor g(pred.shape());
  const float scale = 2.0f / static_cast<float>(pred.numel());
  for (int64_t i = 0; i < pred.numel(); ++i) g[i] = scale * (pred[i] - target[i]);
  return g;
}

double mean_abs(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mean_abs");
  double acc = 0.0;
  for (int64_t i = 0; i < a.numel(); ++i) acc += std::abs(static_cast<double>(a[i]) - b[i]);
  return acc / static_cast<double>(a.numel());
}

Tensor mean_abs_grad(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mean_abs_grad");
  Tensor g(a.shape());
  const float scale = 1.0f / static_cast<float>(a.numel());
  for (int64_t i = 0; i < a.numel(); ++i) {
    const float d = a[i] - b[i];
    g[i] = d > 0.0f ? scale : (d < 0.0f ? -scale : 0.0f);
  }
  return g;
}

double softmax_xent(const Tensor& logits, const std::vector<int>& labels, Tensor* glogits) {
  const int n = logits.dim(0), k = logits.dim(1);
  if (static_cast<int>(labels.size()) != n) throw InvalidArgument("softmax_xent: label count");
  if (glogits) *glogits = Tensor({n, k});
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    const float* lr = logits.data() + static_cast<int64_t>(i) * k;
    float mx = lr[0];
    for (int j = 1; j < k; ++j) mx = std::max(mx, lr[j]);
    double z = 0.0;
    for (int j = 0; j < k; ++j) z += std::exp(static_cast<double>(lr[j]) - mx);
    const double logz = std::log(z) + mx;
    loss += logz - lr[labels[i]];
    if (glogits) {
      for (int j = 0; j < k; ++j) {
        const double p = std::exp(static_cast<double>(lr[j]) - logz);
        glogits->at2(i, j) = static_cast<float>((p - (j == labels[i] ? 1.0 : 0.0)) / n);
      }
    }
  }
  return loss / n;
}

}  // namespace roboswap::nn
