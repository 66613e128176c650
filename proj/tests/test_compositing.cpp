#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "roboswap/compositing/distort.hpp"
#include "roboswap/compositing/ops.hpp"
#include "roboswap/compositing/warp.hpp"
#include "roboswap/core/rng.hpp"
#include "roboswap/datagen/generate.hpp"

using namespace roboswap;
using namespace roboswap::datagen;

namespace {

RenderedClip make_clip(uint64_t seed, int frames = 8, TaskKind task = TaskKind::reach) {
  const SceneSpec spec = make_scene_spec(Domain::A, seed, 64, 64);
  const Trajectory traj = sample_task_trajectory(spec, frames, task, seed);
  return render_clip(spec, traj);
}

Tensor smooth_image(int h, int w) {
  Tensor img({3, h, w});
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        img.at3(c, y, x) =
            0.5f + 0.4f * std::sin(0.13f * x + 0.07f * y + c) * std::cos(0.05f * y - 0.11f * x);
  return img;
}

}  // namespace

TEST_CASE("extract_arm identity, null and support") {
  const RenderedClip clip = make_clip(10);
  const int n = clip.video.frames(), hw = 64 * 64;

  MaskSequence ones(n, 64, 64);
  std::fill(ones.data.raw().begin(), ones.data.raw().end(), 1.0f);
  const ArmVideo all = extract_arm(clip.video, ones);
  CHECK(all.video.data.raw() == clip.video.data.raw());

  MaskSequence zeros(n, 64, 64);
  const ArmVideo none = extract_arm(clip.video, zeros);
  for (int64_t i = 0; i < none.video.data.numel(); ++i) CHECK(none.video.data[i] == 0.0f);

  const ArmVideo arm = extract_arm(clip.video, clip.masks);
  for (int i = 0; i < n; ++i) {
    const float* a = arm.video.frame(i);
    const float* m = clip.masks.frame(i);
    for (int p = 0; p < hw; ++p) {
      const bool nonzero = a[p] != 0.0f || a[hw + p] != 0.0f || a[2 * hw + p] != 0.0f;
      if (nonzero) CHECK(m[p] == 1.0f);
      if (m[p] == 0.0f) CHECK(a[p] == 0.0f);
    }
  }

  // idempotence
  const ArmVideo twice = extract_arm(arm.video, clip.masks);
  CHECK(twice.video.data.raw() == arm.video.data.raw());

  MaskSequence bad(n, 32, 32);
  CHECK_THROWS_AS(extract_arm(clip.video, bad), InvalidArgument);
}

TEST_CASE("extract_background modes") {
  const RenderedClip clip = make_clip(11, 16);

  const BackgroundVideo gt =
      extract_background(clip.video, clip.masks, BackgroundMode::ground_truth, &clip.background);
  CHECK(gt.video.data.raw() == clip.background.data.raw());

  CHECK_THROWS_AS(extract_background(clip.video, clip.masks, BackgroundMode::ground_truth),
                  MissingData);

  // temporal median recovers static background wherever the arm covers a
  // pixel in fewer than half the frames
  const BackgroundVideo med =
      extract_background(clip.video, clip.masks, BackgroundMode::temporal_median);
  const int n = clip.video.frames(), hw = 64 * 64;
  for (int p = 0; p < hw; ++p) {
    int covered = 0;
    for (int i = 0; i < n; ++i) covered += clip.masks.frame(i)[p] != 0.0f ? 1 : 0;
    if (covered == 0 || covered * 2 >= n) continue;
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < 3; ++c)
        CHECK(med.video.frame(i)[c * hw + p] == clip.background.frame(i)[c * hw + p]);
  }

  MaskSequence ones(n, 64, 64);
  std::fill(ones.data.raw().begin(), ones.data.raw().end(), 1.0f);
  const BackgroundVideo fill =
      extract_background(clip.video, ones, BackgroundMode::constant_fill, nullptr, 0.5f);
  for (int64_t i = 0; i < fill.video.data.numel(); ++i) CHECK(fill.video.data[i] == 0.5f);
}

TEST_CASE("alpha_blend identities and round trip") {
  const RenderedClip clip = make_clip(12);
  const ArmVideo arm = extract_arm(clip.video, clip.masks);
  const BackgroundVideo bkg =
      extract_background(clip.video, clip.masks, BackgroundMode::ground_truth, &clip.background);

  const VideoTensor blended = alpha_blend(arm, bkg, clip.masks);
  CHECK(blended.data.raw() == clip.video.data.raw());  // bit-exact round trip

  const int n = clip.video.frames();
  MaskSequence ones(n, 64, 64);
  std::fill(ones.data.raw().begin(), ones.data.raw().end(), 1.0f);
  CHECK(alpha_blend(arm, bkg, ones).data.raw() == arm.video.data.raw());
  MaskSequence zeros(n, 64, 64);
  CHECK(alpha_blend(arm, bkg, zeros).data.raw() == bkg.video.data.raw());
}

TEST_CASE("gaussian_blur identity, constant and impulse oracle") {
  const Tensor img = smooth_image(32, 32);
  CHECK(gaussian_blur(img, 0.0f).raw() == img.raw());

  Tensor constant({3, 16, 16}, 0.37f);
  const Tensor blurred = gaussian_blur(constant, 2.3f);
  for (int64_t i = 0; i < blurred.numel(); ++i)
    CHECK(std::abs(blurred[i] - 0.37f) < 1e-6f);

  // impulse response equals the normalized separable kernel product
  const float sigma = 1.0f;
  const int radius = 3;  // ceil(3*sigma)
  Tensor impulse({1, 33, 33});
  impulse.at3(0, 16, 16) = 1.0f;
  const Tensor resp = gaussian_blur(impulse, sigma);
  double k1d[7], ksum = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    k1d[j + radius] = std::exp(-0.5 * j * j / (sigma * sigma));
    ksum += k1d[j + radius];
  }
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx) {
      const double expected = (k1d[dy + radius] / ksum) * (k1d[dx + radius] / ksum);
      CHECK(std::abs(resp.at3(0, 16 + dy, 16 + dx) - expected) < 1e-6);
    }
}

TEST_CASE("elastic_transform identity, constants and field statistics oracle") {
  const Tensor img = smooth_image(64, 64);
  CHECK(elastic_transform(img, 0.0f, 8.0f, 5).raw() == img.raw());

  Tensor constant({3, 64, 64}, 0.42f);
  const Tensor warped = elastic_transform(constant, 4.0f, 8.0f, 5);
  for (int y = 8; y < 56; ++y)
    for (int x = 8; x < 56; ++x)
      for (int c = 0; c < 3; ++c) CHECK(std::abs(warped.at3(c, y, x) - 0.42f) < 1e-6f);

  // measure displacements by warping coordinate ramps; compare against a
  // brute-force direct-convolution field oracle
  const float alpha = 4.0f, sigma = 8.0f;
  const uint64_t seed = 99;
  Tensor ramp({1, 64, 64});
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) ramp.at3(0, y, x) = static_cast<float>(x);
  const Tensor rx = elastic_transform(ramp, alpha, sigma, seed);
  double measured = 0.0;
  int count = 0;
  for (int y = 10; y < 54; ++y)
    for (int x = 10; x < 54; ++x) {
      measured += std::abs(rx.at3(0, y, x) - x);
      ++count;
    }
  measured /= count;

  // oracle: regenerate the raw field, smooth it by direct 2-d convolution
  Rng rng(seed);
  std::vector<double> field(64 * 64);
  for (auto& v : field) v = rng.uniform(-1.0, 1.0);
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<size_t>(2 * r + 1));
  double ks = 0.0;
  for (int j = -r; j <= r; ++j) {
    k[static_cast<size_t>(j + r)] = std::exp(-0.5 * j * j / (sigma * sigma));
    ks += k[static_cast<size_t>(j + r)];
  }
  for (auto& v : k) v /= ks;
  auto reflect = [](int i, int n) {
    while (i < 0 || i >= n) {
      if (i < 0) i = -i;
      if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
  };
  double oracle = 0.0;
  for (int y = 10; y < 54; ++y)
    for (int x = 10; x < 54; ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          acc += k[static_cast<size_t>(dy + r)] * k[static_cast<size_t>(dx + r)] *
                 field[static_cast<size_t>(reflect(y + dy, 64)) * 64 + reflect(x + dx, 64)];
      oracle += std::abs(alpha * acc);
    }
  oracle /= count;

  CHECK(measured == doctest::Approx(oracle).epsilon(0.25));
}

TEST_CASE("perspective_transform identity, determinism, invertibility") {
  const Tensor img = smooth_image(64, 64);

  Mat3 h{};
  const Tensor same = perspective_transform(img, 0.0f, 3, &h);
  CHECK(same.raw() == img.raw());
  for (int i = 0; i < 9; ++i) CHECK(std::abs(h[i] - mat3_identity()[i]) < 1e-9);

  Mat3 h1{}, h2{};
  perspective_transform(img, 0.05f, 42, &h1);
  perspective_transform(img, 0.05f, 42, &h2);
  for (int i = 0; i < 9; ++i) CHECK(h1[i] == h2[i]);

  // warp by H then H^-1 recovers interior pixels within 2/255
  const Tensor fwd = warp_homography(img, h1);
  const Tensor back = warp_homography(fwd, mat3_inverse(h1));
  for (int y = 10; y < 54; ++y)
    for (int x = 10; x < 54; ++x)
      for (int c = 0; c < 3; ++c)
        CHECK(std::abs(back.at3(c, y, x) - img.at3(c, y, x)) <= 2.0f / 255.0f);

  CHECK_THROWS_AS(perspective_transform(img, 0.3f, 0), InvalidArgument);
}

TEST_CASE("distort_arm_video identity, determinism and effect size") {
  const RenderedClip clip = make_clip(13);
  const ArmVideo arm = extract_arm(clip.video, clip.masks);

  DistortionParams zero;
  zero.elastic_alpha = 0.0f;
  zero.elastic_sigma = 0.0f;
  zero.perspective_jitter = 0.0f;
  zero.blur_sigma_lo = 0.0f;
  zero.blur_sigma_hi = 0.0f;
  const ArmVideo same = distort_arm_video(arm, zero);
  CHECK(same.video.data.raw() == arm.video.data.raw());

  DistortionParams params;  // defaults
  params.seed = 21;
  const ArmVideo d1 = distort_arm_video(arm, params);
  const ArmVideo d2 = distort_arm_video(arm, params);
  CHECK(d1.video.data.raw() == d2.video.data.raw());
  CHECK(d1.video.frames() == arm.video.frames());

  // output differs from input on at least 1% of arm pixels by > 2/255
  const int hw = 64 * 64;
  int64_t arm_px = 0, changed = 0;
  for (int i = 0; i < arm.video.frames(); ++i) {
    const float* m = clip.masks.frame(i);
    const float* a = arm.video.frame(i);
    const float* d = d1.video.frame(i);
    for (int p = 0; p < hw; ++p) {
      if (m[p] == 0.0f) continue;
      ++arm_px;
      for (int c = 0; c < 3; ++c)
        if (std::abs(a[c * hw + p] - d[c * hw + p]) > 2.0f / 255.0f) {
          ++changed;
          break;
        }
    }
  }
  CHECK(changed * 100 >= arm_px);

  DistortionParams bad;
  bad.perspective_jitter = 0.5f;
  CHECK_THROWS_AS(distort_arm_video(arm, bad), InvalidArgument);
}
