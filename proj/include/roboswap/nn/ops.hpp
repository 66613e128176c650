#pragma once

#include "roboswap/core/tensor.hpp"

namespace roboswap::nn {

// Functional ops with explicit backward passes. Forward functions are pure;
// backward takes whatever the op needs saved (inputs or outputs) and
// accumulates into parameter gradients (gw/gb are += so shared weights work).

// x[N,Cin,H,W], w[Cout,Cin,kh,kw], b[Cout] -> y[N,Cout,Ho,Wo]
Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor* b, int stride, int pad);
void conv2d_backward(const Tensor& x, const Tensor& w, int stride, int pad, const Tensor& gy,
                     Tensor* gx, Tensor* gw, Tensor* gb);

// Temporal mixing along the frame axis. x[N,C,H,W], w[Cout,Cin,k] -> y[N,Cout,H,W].
Tensor conv1d_time(const Tensor& x, const Tensor& w, const Tensor* b);
void conv1d_time_backward(const Tensor& x, const Tensor& w, const Tensor& gy, Tensor* gx,
                          Tensor* gw, Tensor* gb);

// x[N,I], w[O,I], b[O] -> y[N,O]
Tensor linear(const Tensor& x, const Tensor& w, const Tensor* b);
void linear_backward(const Tensor& x, const Tensor& w, const Tensor& gy, Tensor* gx, Tensor* gw,
                     Tensor* gb);

struct InstanceNormCache {
  Tensor xhat;     // normalized input
  Tensor inv_std;  // [N,C]
};
Tensor instance_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                     InstanceNormCache* cache, float eps = 1e-5f);
void instance_norm_backward(const InstanceNormCache& cache, const Tensor& gamma, const Tensor& gy,
                            Tensor* gx, Tensor* ggamma, Tensor* gbeta);

Tensor relu(const Tensor& x);
void relu_backward(const Tensor& x, const Tensor& gy, Tensor* gx);
Tensor leaky_relu(const Tensor& x, float slope);
void leaky_relu_backward(const Tensor& x, float slope, const Tensor& gy, Tensor* gx);
Tensor tanh_act(const Tensor& x);
void tanh_backward(const Tensor& y, const Tensor& gy, Tensor* gx);  // from output
Tensor sigmoid(const Tensor& x);
void sigmoid_backward(const Tensor& y, const Tensor& gy, Tensor* gx);  // from output
Tensor silu(const Tensor& x);
void silu_backward(const Tensor& x, const Tensor& gy, Tensor* gx);

Tensor upsample2x_nearest(const Tensor& x);  // NCHW
void upsample2x_nearest_backward(const Tensor& gy, Tensor* gx);

Tensor concat_channels(const Tensor& a, const Tensor& b);  // NCHW
void split_channels_grad(const Tensor& g, int ca, Tensor* ga, Tensor* gb);

Tensor global_avg_pool(const Tensor& x);  // [N,C,H,W] -> [N,C]
void global_avg_pool_backward(const Tensor& gy, int h, int w, Tensor* gx);

// Elementwise helpers
Tensor add(const Tensor& a, const Tensor& b);
void add_inplace(Tensor& a, const Tensor& b);
void scale_inplace(Tensor& a, float s);
Tensor mul(const Tensor& a, const Tensor& b);

// Losses (double accumulation)
double mse(const Tensor& pred, const Tensor& target);
Tensor mse_grad(const Tensor& pred, const Tensor& target);  // d/dpred of mean squared error
double mean_abs(const Tensor& a, const Tensor& b);
Tensor mean_abs_grad(const Tensor& a, const Tensor& b);  // d/da of mean |a-b|

// Softmax cross-entropy over logits [N,K] with integer labels.
double softmax_xent(const Tensor& logits, const std::vector<int>& labels, Tensor* glogits);

}  // namespace roboswap::nn
