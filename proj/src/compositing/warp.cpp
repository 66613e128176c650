#include "roboswap/compositing/warp.hpp"

#include <cmath>

#include "roboswap/core/error.hpp"

namespace roboswap {

float bilinear_sample_zero(const float* plane, int h, int w, float fy, float fx) {
  const int x0 = static_cast<int>(std::floor(fx));
  const int y0 = static_cast<int>(std::floor(fy));
  const float wx = fx - x0;
  const float wy = fy - y0;
  auto at = [&](int y, int x) -> float {
    if (y < 0 || y >= h || x < 0 || x >= w) return 0.0f;
    return plane[y * w + x];
  };
  const float top = (1.0f - wx) * at(y0, x0) + wx * at(y0, x0 + 1);
  const float bot = (1.0f - wx) * at(y0 + 1, x0) + wx * at(y0 + 1, x0 + 1);
  return (1.0f - wy) * top + wy * bot;
}

Tensor resize_bilinear(const Tensor& img, int out_h, int out_w) {
  if (img.ndim() != 3) throw InvalidArgument("resize_bilinear: expected [C,h,w]");
  const int c = img.dim(0), h = img.dim(1), w = img.dim(2);
  if (out_h == h && out_w == w) return img;
  Tensor out({c, out_h, out_w});
  const float sy = static_cast<float>(h) / out_h;
  const float sx = static_cast<float>(w) / out_w;
  for (int ch = 0; ch < c; ++ch) {
    const float* src = img.data() + static_cast<int64_t>(ch) * h * w;
    float* dst = out.data() + static_cast<int64_t>(ch) * out_h * out_w;
    for (int y = 0; y < out_h; ++y) {
      float fy = (y + 0.5f) * sy - 0.5f;
      fy = fy < 0.0f ? 0.0f : (fy > h - 1 ? h - 1 : fy);
      for (int x = 0; x < out_w; ++x) {
        float fx = (x + 0.5f) * sx - 0.5f;
        fx = fx < 0.0f ? 0.0f : (fx > w - 1 ? w - 1 : fx);
        dst[y * out_w + x] = bilinear_sample_zero(src, h, w, fy, fx);
      }
    }
  }
  return out;
}

PixelBox nonzero_box(const float* plane, int h, int w) {
  PixelBox box;
  box.y0 = h;
  box.x0 = w;
  box.y1 = -1;
  box.x1 = -1;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (plane[y * w + x] != 0.0f) {
        box.y0 = std::min(box.y0, y);
        box.x0 = std::min(box.x0, x);
        box.y1 = std::max(box.y1, y);
        box.x1 = std::max(box.x1, x);
      }
  return box;
}

Mat3 mat3_identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

Mat3 mat3_inverse(const Mat3& m) {
  const double a = m[0], b = m[1], c = m[2];
  const double d = m[3], e = m[4], f = m[5];
  const double g = m[6], h = m[7], i = m[8];
  const double det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  if (std::abs(det) < 1e-14) throw NumericError("mat3_inverse: singular matrix");
  const double inv = 1.0 / det;
  return {(e * i - f * h) * inv, (c * h - b * i) * inv, (b * f - c * e) * inv,
          (f * g - d * i) * inv, (a * i - c * g) * inv, (c * d - a * f) * inv,
          (d * h - e * g) * inv, (b * g - a * h) * inv, (a * e - b * d) * inv};
}

std::pair<double, double> apply_homography(const Mat3& m, double x, double y) {
  const double zx = m[0] * x + m[1] * y + m[2];
  const double zy = m[3] * x + m[4] * y + m[5];
  const double zw = m[6] * x + m[7] * y + m[8];
  if (std::abs(zw) < 1e-14) throw NumericError("apply_homography: point at infinity");
  return {zx / zw, zy / zw};
}

Mat3 fit_homography(const std::array<std::pair<double, double>, 4>& src,
                    const std::array<std::pair<double, double>, 4>& dst) {
  // 8x8 linear system A h = b for h = (h00..h21), h22 fixed to 1.
  double A[8][8] = {};
  double b[8] = {};
  for (int i = 0; i < 4; ++i) {
    const double x = src[i].first, y = src[i].second;
    const double u = dst[i].first, v = dst[i].second;
    double* r0 = A[2 * i];
    double* r1 = A[2 * i + 1];
    r0[0] = x;
    r0[1] = y;
    r0[2] = 1;
    r0[6] = -u * x;
    r0[7] = -u * y;
    b[2 * i] = u;
    r1[3] = x;
    r1[4] = y;
    r1[5] = 1;
    r1[6] = -v * x;
    r1[7] = -v * y;
    b[2 * i + 1] = v;
  }
  // Gaussian elimination with partial pivoting.
  int perm[8] = {0, 1, 2, 3, 4, 5, 6, 7};
  for (int col = 0; col < 8; ++col) {
    int piv = col;
    for (int r = col + 1; r < 8; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-12) throw NumericError("fit_homography: singular system");
    if (piv != col) {
      for (int k = 0; k < 8; ++k) std::swap(A[piv][k], A[col][k]);
      std::swap(b[piv], b[col]);
      std::swap(perm[piv], perm[col]);
    }
    for (int r = col + 1; r < 8; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int k = col; k < 8; ++k) A[r][k] -= f * A[col][k];
      b[r] -= f * b[col];
    }
  }
  double h[8];
  for (int r = 7; r >= 0; --r) {
    double acc = b[r];
    for (int k = r + 1; k < 8; ++k) acc -= A[r][k] * h[k];
    h[r] = acc / A[r][r];
  }
  return {h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], 1.0};
}

Tensor warp_homography(const Tensor& image, const Mat3& hm) {
  if (image.ndim() != 3) throw InvalidArgument("warp_homography: expected [C,h,w]");
  const int c = image.dim(0), h = image.dim(1), w = image.dim(2);
  const Mat3 inv = mat3_inverse(hm);
  Tensor out(image.shape());
  for (int ch = 0; ch < c; ++ch) {
    const float* src = image.data() + static_cast<int64_t>(ch) * h * w;
    float* dst = out.data() + static_cast<int64_t>(ch) * h * w;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const auto [fx, fy] = apply_homography(inv, x, y);
        dst[y * w + x] =
            bilinear_sample_zero(src, h, w, static_cast<float>(fy), static_cast<float>(fx));
      }
  }
  return out;
}

}  // namespace roboswap
