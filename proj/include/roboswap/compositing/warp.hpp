#pragma once

#include <array>
#include <optional>

#include "roboswap/compositing/video.hpp"

namespace roboswap {

// Bilinear sample of one channel plane [h,w] at (fy,fx); zero outside.
float bilinear_sample_zero(const float* plane, int h, int w, float fy, float fx);

// Bilinear resize of a [3,h,w] (or [1,h,w]) image with half-pixel centers and
// edge clamping.
Tensor resize_bilinear(const Tensor& img, int out_h, int out_w);

struct PixelBox {
  int y0 = 0, x0 = 0, y1 = -1, x1 = -1;  // inclusive
  bool empty() const { return y1 < y0 || x1 < x0; }
  int height() const { return y1 - y0 + 1; }
  int width() const { return x1 - x0 + 1; }

  PixelBox dilated(int px, int h, int w) const {
    PixelBox b = *this;
    b.y0 = std::max(0, y0 - px);
    b.x0 = std::max(0, x0 - px);
    b.y1 = std::min(h - 1, y1 + px);
    b.x1 = std::min(w - 1, x1 + px);
    return b;
  }
};

// Tight box around nonzero pixels of a [h,w] plane; empty box if all zero.
PixelBox nonzero_box(const float* plane, int h, int w);

// 3x3 homography, row-major.
using Mat3 = std::array<double, 9>;
Mat3 mat3_identity();
Mat3 mat3_inverse(const Mat3& m);
// Maps (x,y) through the homography; returns (x', y').
std::pair<double, double> apply_homography(const Mat3& m, double x, double y);
// Least-squares-free exact fit from 4 point correspondences (DLT, 8x8 solve).
// Throws NumericError on a singular system.
Mat3 fit_homography(const std::array<std::pair<double, double>, 4>& src,
                    const std::array<std::pair<double, double>, 4>& dst);

// out(q) = in(H^-1 q), bilinear, zero outside. image is [C,h,w].
Tensor warp_homography(const Tensor& image, const Mat3& h);

}  // namespace roboswap
