#include "roboswap/core/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

namespace roboswap::kernels {

namespace {
Backend g_backend = Backend::parallel;
}

Backend backend() { return g_backend; }
void set_backend(Backend b) { g_backend = b; }

// ---------------------------------------------------------------------------
// Reference kernels: one output element at a time, textbook loops.
// Accumulation order per element is ascending (cin, kh, kw); the parallel
// kernels below preserve exactly that order.
// ---------------------------------------------------------------------------

namespace reference {

void conv2d_forward(const Conv2dDims& d, const float* x, const float* w, const float* bias,
                    float* y) {
  for (int n = 0; n < d.n; ++n) {
    for (int oc = 0; oc < d.cout; ++oc) {
      for (int oh = 0; oh < d.ho; ++oh) {
        for (int ow = 0; ow < d.wo; ++ow) {
          float acc = bias ? bias[oc] : 0.0f;
          for (int ic = 0; ic < d.cin; ++ic) {
            for (int ky = 0; ky < d.kh; ++ky) {
              const int iy = oh * d.stride + ky - d.pad;
              if (iy < 0 || iy >= d.h) continue;
              for (int kx = 0; kx < d.kw; ++kx) {
                const int ix = ow * d.stride + kx - d.pad;
                if (ix < 0 || ix >= d.w) continue;
                acc += w[((static_cast<int64_t>(oc) * d.cin + ic) * d.kh + ky) * d.kw + kx] *
                       x[((static_cast<int64_t>(n) * d.cin + ic) * d.h + iy) * d.w + ix];
              }
            }
          }
          y[((static_cast<int64_t>(n) * d.cout + oc) * d.ho + oh) * d.wo + ow] = acc;
        }
      }
    }
  }
}

void conv2d_grad_input(const Conv2dDims& d, const float* w, const float* gy, float* gx) {
  for (int n = 0; n < d.n; ++n) {
    for (int ic = 0; ic < d.cin; ++ic) {
      for (int iy = 0; iy < d.h; ++iy) {
        for (int ix = 0; ix < d.w; ++ix) {
          float acc = 0.0f;
          for (int oc = 0; oc < d.cout; ++oc) {
            for (int ky = 0; ky < d.kh; ++ky) {
              const int num_y = iy - ky + d.pad;
              if (num_y < 0 || num_y % d.stride != 0) continue;
              const int oh = num_y / d.stride;
              if (oh >= d.ho) continue;
              for (int kx = 0; kx < d.kw; ++kx) {
                const int num_x = ix - kx + d.pad;
                if (num_x < 0 || num_x % d.stride != 0) continue;
                const int ow = num_x / d.stride;
                if (ow >= d.wo) continue;
                acc += w[((static_cast<int64_t>(oc) * d.cin + ic) * d.kh + ky) * d.kw + kx] *
                       gy[((static_cast<int64_t>(n) * d.cout + oc) * d.ho + oh) * d.wo + ow];
              }
            }
          }
          gx[((static_cast<int64_t>(n) * d.cin + ic) * d.h + iy) * d.w + ix] = acc;
        }
      }
    }
  }
}

void conv2d_grad_weight(const Conv2dDims& d, const float* x, const float* gy, float* gw,
                        float* gbias) {
  for (int oc = 0; oc < d.cout; ++oc) {
    for (int ic = 0; ic < d.cin; ++ic) {
      for (int ky = 0; ky < d.kh; ++ky) {
        for (int kx = 0; kx < d.kw; ++kx) {
          float acc = 0.0f;
          for (int n = 0; n < d.n; ++n) {
            for (int oh = 0; oh < d.ho; ++oh) {
              const int iy = oh * d.stride + ky - d.pad;
              if (iy < 0 || iy >= d.h) continue;
              for (int ow = 0; ow < d.wo; ++ow) {
                const int ix = ow * d.stride + kx - d.pad;
                if (ix < 0 || ix >= d.w) continue;
                acc += gy[((static_cast<int64_t>(n) * d.cout + oc) * d.ho + oh) * d.wo + ow] *
                       x[((static_cast<int64_t>(n) * d.cin + ic) * d.h + iy) * d.w + ix];
              }
            }
          }
          gw[((static_cast<int64_t>(oc) * d.cin + ic) * d.kh + ky) * d.kw + kx] += acc;
        }
      }
    }
  }
  if (gbias) {
    for (int oc = 0; oc < d.cout; ++oc) {
      float acc = 0.0f;
      for (int n = 0; n < d.n; ++n)
        for (int oh = 0; oh < d.ho; ++oh)
          for (int ow = 0; ow < d.wo; ++ow)
            acc += gy[((static_cast<int64_t>(n) * d.cout + oc) * d.ho + oh) * d.wo + ow];
      gbias[oc] += acc;
    }
  }
}

void conv1d_time_forward(int n, int cin, int cout, int hw, int k, const float* x, const float* w,
                         const float* bias, float* y) {
  const int pad = k / 2;
  for (int t = 0; t < n; ++t) {
    for (int oc = 0; oc < cout; ++oc) {
      for (int p = 0; p < hw; ++p) {
        float acc = bias ? bias[oc] : 0.0f;
        for (int ic = 0; ic < cin; ++ic) {
          for (int kk = 0; kk < k; ++kk) {
            const int tt = t + kk - pad;
            if (tt < 0 || tt >= n) continue;
            acc += w[(static_cast<int64_t>(oc) * cin + ic) * k + kk] *
                   x[(static_cast<int64_t>(tt) * cin + ic) * hw + p];
          }
        }
        y[(static_cast<int64_t>(t) * cout + oc) * hw + p] = acc;
      }
    }
  }
}

void conv1d_time_grad_input(int n, int cin, int cout, int hw, int k, const float* w,
                            const float* gy, float* gx) {
  const int pad = k / 2;
  for (int t = 0; t < n; ++t) {
    for (int ic = 0; ic < cin; ++ic) {
      for (int p = 0; p < hw; ++p) {
        float acc = 0.0f;
        for (int oc = 0; oc < cout; ++oc) {
          for (int kk = 0; kk < k; ++kk) {
            const int to = t - kk + pad;  // output frame that consumed (t, kk)
            if (to < 0 || to >= n) continue;
            acc += w[(static_cast<int64_t>(oc) * cin + ic) * k + kk] *
                   gy[(static_cast<int64_t>(to) * cout + oc) * hw + p];
          }
        }
        gx[(static_cast<int64_t>(t) * cin + ic) * hw + p] = acc;
      }
    }
  }
}

void conv1d_time_grad_weight(int n, int cin, int cout, int hw, int k, const float* x,
                             const float* gy, float* gw, float* gbias) {
  const int pad = k / 2;
  for (int oc = 0; oc < cout; ++oc) {
    for (int ic = 0; ic < cin; ++ic) {
      for (int kk = 0; kk < k; ++kk) {
        float acc = 0.0f;
        for (int t = 0; t < n; ++t) {
          const int tt = t + kk - pad;
          if (tt < 0 || tt >= n) continue;
          for (int p = 0; p < hw; ++p) {
            acc += gy[(static_cast<int64_t>(t) * cout + oc) * hw + p] *
                   x[(static_cast<int64_t>(tt) * cin + ic) * hw + p];
          }
        }
        gw[(static_cast<int64_t>(oc) * cin + ic) * k + kk] += acc;
      }
    }
  }
  if (gbias) {
    for (int oc = 0; oc < cout; ++oc) {
      float acc = 0.0f;
      for (int t = 0; t < n; ++t)
        for (int p = 0; p < hw; ++p) acc += gy[(static_cast<int64_t>(t) * cout + oc) * hw + p];
      gbias[oc] += acc;
    }
  }
}

}  // namespace reference

// ---------------------------------------------------------------------------
// Parallel kernels. Work is split over disjoint output slices; the inner
// accumulation per element keeps the reference order (cin, kh, kw), so the
// result is bit-identical to the reference kernel at any thread count. The
// forward path is additionally restructured so the innermost loop runs over
// contiguous output columns and vectorizes.
// ---------------------------------------------------------------------------

namespace parallel {

void conv2d_forward(const Conv2dDims& d, const float* x, const float* w, const float* bias,
                    float* y) {
  // Zero-padded copy of the input removes all bounds checks from the inner
  // loops. Padding taps contribute exact zeros, so per-element accumulation
  // matches the reference kernel.
  const int hp = d.h + 2 * d.pad, wp = d.w + 2 * d.pad;
  std::vector<float> xpad(static_cast<size_t>(d.n) * d.cin * hp * wp, 0.0f);
#pragma omp parallel for collapse(2) schedule(static)
  for (int n = 0; n < d.n; ++n) {
    for (int ic = 0; ic < d.cin; ++ic) {
      for (int iy = 0; iy < d.h; ++iy) {
        std::memcpy(xpad.data() + ((static_cast<int64_t>(n) * d.cin + ic) * hp + iy + d.pad) * wp +
                        d.pad,
                    x + ((static_cast<int64_t>(n) * d.cin + ic) * d.h + iy) * d.w,
                    sizeof(float) * static_cast<size_t>(d.w));
      }
    }
  }
#pragma omp parallel for collapse(2) schedule(static)
  for (int n = 0; n < d.n; ++n) {
    for (int oc = 0; oc < d.cout; ++oc) {
      float* yplane = y + (static_cast<int64_t>(n) * d.cout + oc) * d.ho * d.wo;
      const float binit = bias ? bias[oc] : 0.0f;
      for (int64_t i = 0; i < static_cast<int64_t>(d.ho) * d.wo; ++i) yplane[i] = binit;
      for (int ic = 0; ic < d.cin; ++ic) {
        const float* xplane = xpad.data() + (static_cast<int64_t>(n) * d.cin + ic) * hp * wp;
        const float* wtap = w + (static_cast<int64_t>(oc) * d.cin + ic) * d.kh * d.kw;
        for (int ky = 0; ky < d.kh; ++ky) {
          for (int kx = 0; kx < d.kw; ++kx) {
            const float wv = wtap[ky * d.kw + kx];
            for (int oh = 0; oh < d.ho; ++oh) {
              const float* xrow = xplane + (oh * d.stride + ky) * wp + kx;
              float* yrow = yplane + static_cast<int64_t>(oh) * d.wo;
              if (d.stride == 1) {
                for (int ow = 0; ow < d.wo; ++ow) yrow[ow] += wv * xrow[ow];
              } else {
                for (int ow = 0; ow < d.wo; ++ow) yrow[ow] += wv * xrow[ow * d.stride];
              }
            }
          }
        }
      }
    }
  }
}

void conv2d_grad_input(const Conv2dDims& d, const float* w, const float* gy, float* gx) {
  // Scatter over the (n,ic) plane owned by one thread. For a fixed input
  // element the contributing taps arrive in ascending (oc,ky,kx), matching
  // the reference gather order.
#pragma omp parallel for collapse(2) schedule(static)
  for (int n = 0; n < d.n; ++n) {
    for (int ic = 0; ic < d.cin; ++ic) {
      float* gxplane = gx + (static_cast<int64_t>(n) * d.cin + ic) * d.h * d.w;
      for (int64_t i = 0; i < static_cast<int64_t>(d.h) * d.w; ++i) gxplane[i] = 0.0f;
      for (int oc = 0; oc < d.cout; ++oc) {
        const float* gyplane = gy + (static_cast<int64_t>(n) * d.cout + oc) * d.ho * d.wo;
        const float* wtap = w + (static_cast<int64_t>(oc) * d.cin + ic) * d.kh * d.kw;
        for (int ky = 0; ky < d.kh; ++ky) {
          int oh_lo = 0;
          if (d.pad > ky) oh_lo = (d.pad - ky + d.stride - 1) / d.stride;
          const int max_num_y = d.h - 1 - ky + d.pad;
          const int oh_hi = max_num_y < 0 ? 0 : std::min(d.ho, max_num_y / d.stride + 1);
          for (int kx = 0; kx < d.kw; ++kx) {
            const float wv = wtap[ky * d.kw + kx];
            int ow_lo = 0;
            if (d.pad > kx) ow_lo = (d.pad - kx + d.stride - 1) / d.stride;
            const int max_num_x = d.w - 1 - kx + d.pad;
            const int ow_hi = max_num_x < 0 ? 0 : std::min(d.wo, max_num_x / d.stride + 1);
            for (int oh = oh_lo; oh < oh_hi; ++oh) {
              const int iy = oh * d.stride + ky - d.pad;
              float* gxrow = gxplane + static_cast<int64_t>(iy) * d.w + kx - d.pad;
              const float* gyrow = gyplane + static_cast<int64_t>(oh) * d.wo;
              if (d.stride == 1) {
                for (int ow = ow_lo; ow < ow_hi; ++ow) gxrow[ow] += wv * gyrow[ow];
              } else {
                for (int ow = ow_lo; ow < ow_hi; ++ow) gxrow[ow * d.stride] += wv * gyrow[ow];
              }
            }
          }
        }
      }
    }
  }
}

void conv2d_grad_weight(const Conv2dDims& d, const float* x, const float* gy, float* gw,
                        float* gbias) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int oc = 0; oc < d.cout; ++oc) {
    for (int ic = 0; ic < d.cin; ++ic) {
      for (int ky = 0; ky < d.kh; ++ky) {
        int oh_lo = 0;
        if (d.pad > ky) oh_lo = (d.pad - ky + d.stride - 1) / d.stride;
        const int max_num_y = d.h - 1 - ky + d.pad;
        const int oh_hi = max_num_y < 0 ? 0 : std::min(d.ho, max_num_y / d.stride + 1);
        for (int kx = 0; kx < d.kw; ++kx) {
          int ow_lo = 0;
          if (d.pad > kx) ow_lo = (d.pad - kx + d.stride - 1) / d.stride;
          const int max_num_x = d.w - 1 - kx + d.pad;
          const int ow_hi = max_num_x < 0 ? 0 : std::min(d.wo, max_num_x / d.stride + 1);
          float acc = 0.0f;
          for (int n = 0; n < d.n; ++n) {
            const float* gyplane = gy + (static_cast<int64_t>(n) * d.cout + oc) * d.ho * d.wo;
            const float* xplane = x + (static_cast<int64_t>(n) * d.cin + ic) * d.h * d.w;
            for (int oh = oh_lo; oh < oh_hi; ++oh) {
              const int iy = oh * d.stride + ky - d.pad;
              const float* gyrow = gyplane + static_cast<int64_t>(oh) * d.wo;
              const float* xrow = xplane + static_cast<int64_t>(iy) * d.w + kx - d.pad;
              if (d.stride == 1) {
                for (int ow = ow_lo; ow < ow_hi; ++ow) acc += gyrow[ow] * xrow[ow];
              } else {
                for (int ow = ow_lo; ow < ow_hi; ++ow) acc += gyrow[ow] * xrow[ow * d.stride];
              }
            }
          }
          gw[((static_cast<int64_t>(oc) * d.cin + ic) * d.kh + ky) * d.kw + kx] += acc;
        }
      }
    }
  }
  if (gbias) {
#pragma omp parallel for schedule(static)
    for (int oc = 0; oc < d.cout; ++oc) {
      float acc = 0.0f;
      for (int n = 0; n < d.n; ++n)
        for (int oh = 0; oh < d.ho; ++oh)
          for (int ow = 0; ow < d.wo; ++ow)
            acc += gy[((static_cast<int64_t>(n) * d.cout + oc) * d.ho + oh) * d.wo + ow];
      gbias[oc] += acc;
    }
  }
}

void conv1d_time_forward(int n, int cin, int cout, int hw, int k, const float* x, const float* w,
                         const float* bias, float* y) {
  const int pad = k / 2;
#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < n; ++t) {
    for (int oc = 0; oc < cout; ++oc) {
      float* yrow = y + (static_cast<int64_t>(t) * cout + oc) * hw;
      const float binit = bias ? bias[oc] : 0.0f;
      for (int p = 0; p < hw; ++p) yrow[p] = binit;
      for (int ic = 0; ic < cin; ++ic) {
        for (int kk = 0; kk < k; ++kk) {
          const int tt = t + kk - pad;
          if (tt < 0 || tt >= n) continue;
          const float wv = w[(static_cast<int64_t>(oc) * cin + ic) * k + kk];
          const float* xrow = x + (static_cast<int64_t>(tt) * cin + ic) * hw;
          for (int p = 0; p < hw; ++p) yrow[p] += wv * xrow[p];
        }
      }
    }
  }
}

void conv1d_time_grad_input(int n, int cin, int cout, int hw, int k, const float* w,
                            const float* gy, float* gx) {
  const int pad = k / 2;
#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < n; ++t) {
    for (int ic = 0; ic < cin; ++ic) {
      float* gxrow = gx + (static_cast<int64_t>(t) * cin + ic) * hw;
      for (int p = 0; p < hw; ++p) gxrow[p] = 0.0f;
      for (int oc = 0; oc < cout; ++oc) {
        for (int kk = 0; kk < k; ++kk) {
          const int to = t - kk + pad;
          if (to < 0 || to >= n) continue;
          const float wv = w[(static_cast<int64_t>(oc) * cin + ic) * k + kk];
          const float* gyrow = gy + (static_cast<int64_t>(to) * cout + oc) * hw;
          for (int p = 0; p < hw; ++p) gxrow[p] += wv * gyrow[p];
        }
      }
    }
  }
}

void conv1d_time_grad_weight(int n, int cin, int cout, int hw, int k, const float* x,
                             const float* gy, float* gw, float* gbias) {
  const int pad = k / 2;
#pragma omp parallel for collapse(2) schedule(static)
  for (int oc = 0; oc < cout; ++oc) {
    for (int ic = 0; ic < cin; ++ic) {
      for (int kk = 0; kk < k; ++kk) {
        float acc = 0.0f;
        for (int t = 0; t < n; ++t) {
          const int tt = t + kk - pad;
          if (tt < 0 || tt >= n) continue;
          const float* gyrow = gy + (static_cast<int64_t>(t) * cout + oc) * hw;
          const float* xrow = x + (static_cast<int64_t>(tt) * cin + ic) * hw;
          for (int p = 0; p < hw; ++p) acc += gyrow[p] * xrow[p];
        }
        gw[(static_cast<int64_t>(oc) * cin + ic) * k + kk] += acc;
      }
    }
  }
  if (gbias) {
#pragma omp parallel for schedule(static)
    for (int oc = 0; oc < cout; ++oc) {
      float acc = 0.0f;
      for (int t = 0; t < n; ++t)
        for (int p = 0; p < hw; ++p) acc += gy[(static_cast<int64_t>(t) * cout + oc) * hw + p];
      gbias[oc] += acc;
    }
  }
}

}  // namespace parallel

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

#define RS_DISPATCH(fn, ...)                \
  do {                                      \
    if (g_backend == Backend::reference)    \
      reference::fn(__VA_ARGS__);           \
    else                                    \
      parallel::fn(__VA_ARGS__);            \
  } while (0)

void conv2d_forward(const Conv2dDims& d, const float* x, const float* w, const float* bias,
                    float* y) {
  RS_DISPATCH(conv2d_forward, d, x, w, bias, y);
}
void conv2d_grad_input(const Conv2dDims& d, const float* w, const float* gy, float* gx) {
  RS_DISPATCH(conv2d_grad_input, d, w, gy, gx);
}
void conv2d_grad_weight(const Conv2dDims& d, const float* x, const float* gy, float* gw,
                        float* gbias) {
  RS_DISPATCH(conv2d_grad_weight, d, x, gy, gw, gbias);
}
void conv1d_time_forward(int n, int cin, int cout, int hw, int k, const float* x, const float* w,
                         const float* bias, float* y) {
  RS_DISPATCH(conv1d_time_forward, n, cin, cout, hw, k, x, w, bias, y);
}
void conv1d_time_grad_input(int n, int cin, int cout, int hw, int k, const float* w,
                            const float* gy, float* gx) {
  RS_DISPATCH(conv1d_time_grad_input, n, cin, cout, hw, k, w, gy, gx);
}
void conv1d_time_grad_weight(int n, int cin, int cout, int hw, int k, const float* x,
                             const float* gy, float* gw, float* gbias) {
  RS_DISPATCH(conv1d_time_grad_weight, n, cin, cout, hw, k, x, gy, gw, gbias);
}

#undef RS_DISPATCH

}  // namespace roboswap::kernels
