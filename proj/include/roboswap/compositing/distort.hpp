#pragma once

#include <optional>

#include "roboswap/compositing/video.hpp"
#include "roboswap/compositing/warp.hpp"

namespace roboswap {

// Train-time augmentations that mimic translation artifacts on arm streams.
struct DistortionParams {
  float elastic_alpha = 4.0f;       // displacement magnitude, px
  float elastic_sigma = 8.0f;       // field smoothing, px
  float perspective_jitter = 0.03f; // fraction of min(H,W) for corner offsets
  float blur_sigma_lo = 0.3f;
  float blur_sigma_hi = 1.2f;
  uint64_t seed = 0;

  void validate() const;
  bool is_identity() const {
    return elastic_alpha == 0.0f && perspective_jitter == 0.0f && blur_sigma_lo == 0.0f &&
           blur_sigma_hi == 0.0f;
  }
};

// Pixels resampled through alpha * gaussian_smooth(U(-1,1) field, sigma);
// bilinear pull, zero outside. alpha == 0 returns the input bit-exactly.
Tensor elastic_transform(const Tensor& image, float alpha, float sigma, uint64_t seed);

// Corner jitter homography; bilinear resample, zero outside. Collinear corner
// draws are resampled internally. Optionally reports the fitted matrix.
Tensor perspective_transform(const Tensor& image, float jitter_fraction, uint64_t seed,
                             Mat3* fitted = nullptr);

// Separable convolution, kernel radius ceil(3*sigma), reflect padding.
Tensor gaussian_blur(const Tensor& image, float sigma);

// Per-frame blur -> perspective -> elastic with seeds derived from
// params.seed. Masks are not transported; the result intentionally misaligns
// with the original mask.
ArmVideo distort_arm_video(const ArmVideo& arm, const DistortionParams& params);

}  // namespace roboswap
