#include "roboswap/compositing/distort.hpp"

#include <cmath>
#include <vector>

#include "roboswap/core/error.hpp"
#include "roboswap/core/rng.hpp"

namespace roboswap {

void DistortionParams::validate() const {
  if (elastic_alpha < 0 || elastic_sigma < 0 || blur_sigma_lo < 0 || blur_sigma_hi < 0)
    throw InvalidArgument("DistortionParams: magnitudes must be >= 0");
  if (blur_sigma_hi < blur_sigma_lo)
    throw InvalidArgument("DistortionParams: blur sigma range inverted");
  if (perspective_jitter < 0 || perspective_jitter > 0.2f)
    throw InvalidArgument("DistortionParams: perspective_jitter must be in [0, 0.2]");
}

namespace {

// Reflect-101 index (no edge repeat): valid for any kernel radius < n.
int reflect_index(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

std::vector<float> gaussian_kernel(float sigma, int* radius_out) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  *radius_out = radius;
  std::vector<float> k(static_cast<size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    const double v = std::exp(-0.5 * (static_cast<double>(j) * j) / (static_cast<double>(sigma) * sigma));
    k[static_cast<size_t>(j + radius)] = static_cast<float>(v);
    sum += v;
  }
  for (auto& v : k) v = static_cast<float>(v / sum);
  return k;
}

// Separable blur of a single [h,w] plane, reflect padding.
void blur_plane(const float* src, float* dst, int h, int w, const std::vector<float>& k,
                int radius) {
  std::vector<float> tmp(static_cast<size_t>(h) * w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int j = -radius; j <= radius; ++j)
        acc += k[static_cast<size_t>(j + radius)] * src[y * w + reflect_index(x + j, w)];
      tmp[static_cast<size_t>(y) * w + x] = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int j = -radius; j <= radius; ++j)
        acc += k[static_cast<size_t>(j + radius)] * tmp[static_cast<size_t>(reflect_index(y + j, h)) * w + x];
      dst[y * w + x] = acc;
    }
}

}  // namespace

Tensor gaussian_blur(const Tensor& image, float sigma) {
  if (image.ndim() != 3) throw InvalidArgument("gaussian_blur: expected [C,h,w]");
  if (sigma < 0.0f) throw InvalidArgument("gaussian_blur: sigma must be >= 0");
  if (sigma == 0.0f) return image;
  const int c = image.dim(0), h = image.dim(1), w = image.dim(2);
  int radius = 0;
  const auto k = gaussian_kernel(sigma, &radius);
  Tensor out(image.shape());
  for (int ch = 0; ch < c; ++ch)
    blur_plane(image.data() + static_cast<int64_t>(ch) * h * w,
               out.data() + static_cast<int64_t>(ch) * h * w, h, w, k, radius);
  return out;
}

Tensor elastic_transform(const Tensor& image, float alpha, float sigma, uint64_t seed) {
  if (image.ndim() != 3) throw InvalidArgument("elastic_transform: expected [C,h,w]");
  if (alpha < 0.0f || sigma < 0.0f) throw InvalidArgument("elastic_transform: negative params");
  if (alpha == 0.0f) return image;
  const int c = image.dim(0), h = image.dim(1), w = image.dim(2);

  Rng rng(seed);
  Tensor dx({1, h, w}), dy({1, h, w});
  for (int64_t i = 0; i < dx.numel(); ++i) dx[i] = static_cast<float>(rng.uniform(-1.0, 1.0));
  for (int64_t i = 0; i < dy.numel(); ++i) dy[i] = static_cast<float>(rng.uniform(-1.0, 1.0));
  if (sigma > 0.0f) {
    dx = gaussian_blur(dx, sigma);
    dy = gaussian_blur(dy, sigma);
  }

  Tensor out(image.shape());
  for (int ch = 0; ch < c; ++ch) {
    const float* src = image.data() + static_cast<int64_t>(ch) * h * w;
    float* dst = out.data() + static_cast<int64_t>(ch) * h * w;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const float fx = x + alpha * dx[y * w + x];
        const float fy = y + alpha * dy[y * w + x];
        dst[y * w + x] = bilinear_sample_zero(src, h, w, fy, fx);
      }
  }
  return out;
}

Tensor perspective_transform(const Tensor& image, float jitter_fraction, uint64_t seed,
                             Mat3* fitted) {
  if (image.ndim() != 3) throw InvalidArgument("perspective_transform: expected [C,h,w]");
  if (jitter_fraction < 0.0f || jitter_fraction > 0.2f)
    throw InvalidArgument("perspective_transform: jitter_fraction must be in [0, 0.2]");
  const int h = image.dim(1), w = image.dim(2);
  if (jitter_fraction == 0.0f) {
    if (fitted) *fitted = mat3_identity();
    return image;
  }

  const double m = jitter_fraction * std::min(h, w);
  const std::array<std::pair<double, double>, 4> src = {
      std::pair<double, double>{0.0, 0.0},
      {static_cast<double>(w - 1), 0.0},
      {static_cast<double>(w - 1), static_cast<double>(h - 1)},
      {0.0, static_cast<double>(h - 1)}};

  Rng rng(seed);
  Mat3 hm{};
  for (int attempt = 0;; ++attempt) {
    std::array<std::pair<double, double>, 4> dst;
    for (int i = 0; i < 4; ++i)
      dst[i] = {src[i].first + rng.uniform(-m, m), src[i].second + rng.uniform(-m, m)};
    try {
      hm = fit_homography(src, dst);
      // Reject near-degenerate quads (tiny area or sign-flipped corners).
      const double ax = dst[1].first - dst[0].first, ay = dst[1].second - dst[0].second;
      const double bx = dst[3].first - dst[0].first, by = dst[3].second - dst[0].second;
      if (std::abs(ax * by - ay * bx) < 1e-3) continue;
      break;
    } catch (const NumericError&) {
      if (attempt > 64) throw;  // cannot happen for jitter <= 0.2, kept as a guard
    }
  }
  if (fitted) *fitted = hm;
  return warp_homography(image, hm);
}

ArmVideo distort_arm_video(const ArmVideo& arm, const DistortionParams& params) {
  params.validate();
  if (params.is_identity()) return arm;
  const int n = arm.video.frames(), h = arm.video.height(), w = arm.video.width();
  ArmVideo out;
  out.video = VideoTensor(n, h, w, arm.video.fps);
  for (int i = 0; i < n; ++i) {
    Tensor frame({3, h, w});
    std::copy(arm.video.frame(i), arm.video.frame(i) + 3 * h * w, frame.data());

    Rng blur_rng(derive_seed(params.seed, static_cast<uint64_t>(i), 1));
    const float sigma =
        static_cast<float>(blur_rng.uniform(params.blur_sigma_lo, params.blur_sigma_hi));
    frame = gaussian_blur(frame, sigma);
    frame = perspective_transform(frame, params.perspective_jitter,
                                  derive_seed(params.seed, static_cast<uint64_t>(i), 2));
    frame = elastic_transform(frame, params.elastic_alpha, params.elastic_sigma,
                              derive_seed(params.seed, static_cast<uint64_t>(i), 3));
    std::copy(frame.data(), frame.data() + 3 * h * w, out.video.frame(i));
  }
  // Resampling can overshoot slightly; clamp back to the value range.
  for (int64_t i = 0; i < out.video.data.numel(); ++i) {
    float& v = out.video.data[i];
    v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
  }
  return out;
}

}  // namespace roboswap
