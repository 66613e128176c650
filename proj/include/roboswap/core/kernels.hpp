#pragma once

#include <cstdint>

namespace roboswap::kernels {

// Two implementations of every hot kernel: `reference` is the plain serial
// form kept for testing, `parallel` is the OpenMP form used by default.
// Both accumulate each output element in the same order, so results are
// bit-identical and the tests can compare with operator==.
enum class Backend { reference, parallel };

Backend backend();
void set_backend(Backend b);

struct Conv2dDims {
  int n = 0, cin = 0, h = 0, w = 0;
  int cout = 0, kh = 0, kw = 0;
  int stride = 1, pad = 0;
  int ho = 0, wo = 0;  // derived

  void finalize() {
    ho = (h + 2 * pad - kh) / stride + 1;
    wo = (w + 2 * pad - kw) / stride + 1;
  }
};

namespace reference {
void conv2d_forward(const Conv2dDims& d, const float* x, const float* w, const float* bias,
                    float* y);
void conv2d_grad_input(const Conv2dDims& d, const float* w, const float* gy, float* gx);
void conv2d_grad_weight(const Conv2dDims& d, const float* x, const float* gy, float* gw,
                        float* gbias);
// Temporal conv along the frame axis: x[N,C,H,W] -> y[N,Cout,H,W], kernel k
// taps over frames with zero padding.
void conv1d_time_forward(int n, int cin, int cout, int hw, int k, const float* x, const float* w,
                         const float* bias, float* y);
void conv1d_time_grad_input(int n, int cin, int cout, int hw, int k, const float* w,
                            const float* gy, float* gx);
void conv1d_time_grad_weight(int n, int cin, int cout, int hw, int k, const float* x,
                             const float* gy, float* gw, float* gbias);
}  // namespace reference

namespace parallel {
void conv2d_forward(const Conv2dDims& d, const float* x, const float* w, const float* bias,
                    float* y);
void conv2d_grad_input(const Conv2dDims& d, const float* w, const float* gy, float* gx);
void conv2d_grad_weight(const Conv2dDims& d, const float* x, const float* gy, float* gw,
                        float* gbias);
void conv1d_time_forward(int n, int cin, int cout, int hw, int k, const float* x, const float* w,
                         const float* bias, float* y);
void conv1d_time_grad_input(int n, int cin, int cout, int hw, int k, const float* w,
                            const float* gy, float* gx);
void conv1d_time_grad_weight(int n, int cin, int cout, int hw, int k, const float* x,
                             const float* gy, float* gw, float* gbias);
}  // namespace parallel

// Dispatch on the active backend.
void conv2d_forward(const Conv2dDims& d, const float* x, const float* w, const float* bias,
                    float* y);
void conv2d_grad_input(const Conv2dDims& d, const float* w, const float* gy, float* gx);
void conv2d_grad_weight(const Conv2dDims& d, const float* x, const float* gy, float* gw,
                        float* gbias);
void conv1d_time_forward(int n, int cin, int cout, int hw, int k, const float* x, const float* w,
                         const float* bias, float* y);
void conv1d_time_grad_input(int n, int cin, int cout, int hw, int k, const float* w,
                            const float* gy, float* gx);
void conv1d_time_grad_weight(int n, int cin, int cout, int hw, int k, const float* x,
                             const float* gy, float* gw, float* gbias);

}  // namespace roboswap::kernels
