#include "roboswap/compositing/ops.hpp"

#include <algorithm>
#include <vector>

#include "roboswap/core/error.hpp"

namespace roboswap {

namespace {

void require_match(const VideoTensor& v, const MaskSequence& m, const char* where) {
  if (v.frames() != m.frames() || v.height() != m.height() || v.width() != m.width())
    throw InvalidArgument(std::string(where) + ": video/mask shape mismatch");
}

}  // namespace

ArmVideo extract_arm(const VideoTensor& video, const MaskSequence& masks) {
  require_match(video, masks, "extract_arm");
  ArmVideo out;
  out.video = VideoTensor(video.frames(), video.height(), video.width(), video.fps);
  const int hw = video.height() * video.width();
  for (int i = 0; i < video.frames(); ++i) {
    const float* src = video.frame(i);
    const float* m = masks.frame(i);
    float* dst = out.video.frame(i);
    for (int c = 0; c < 3; ++c)
      for (int p = 0; p < hw; ++p) dst[c * hw + p] = m[p] * src[c * hw + p];
  }
  return out;
}

BackgroundVideo extract_background(const VideoTensor& video, const MaskSequence& masks,
                                   BackgroundMode mode, const VideoTensor* clean_plate,
                                   float fill_gray) {
  require_match(video, masks, "extract_background");
  const int n = video.frames(), h = video.height(), w = video.width();
  const int hw = h * w;

  BackgroundVideo out;
  out.video = VideoTensor(n, h, w, video.fps);

  // Per-pixel fill values for the masked region.
  std::vector<float> median;
  if (mode == BackgroundMode::ground_truth) {
    if (!clean_plate) throw MissingData("extract_background: ground_truth mode needs clean plate");
    if (clean_plate->frames() != n || clean_plate->height() != h || clean_plate->width() != w)
      throw InvalidArgument("extract_background: clean plate shape mismatch");
  } else if (mode == BackgroundMode::temporal_median) {
    // Median over frames per (channel, pixel); lower middle for even counts.
    median.resize(static_cast<size_t>(3) * hw);
    std::vector<float> column(static_cast<size_t>(n));
    for (int c = 0; c < 3; ++c)
      for (int p = 0; p < hw; ++p) {
        for (int i = 0; i < n; ++i) column[static_cast<size_t>(i)] = video.frame(i)[c * hw + p];
        std::nth_element(column.begin(), column.begin() + (n - 1) / 2, column.end());
        median[static_cast<size_t>(c) * hw + p] = column[static_cast<size_t>((n - 1) / 2)];
      }
  }

  for (int i = 0; i < n; ++i) {
    const float* src = video.frame(i);
    const float* m = masks.frame(i);
    float* dst = out.video.frame(i);
    for (int c = 0; c < 3; ++c) {
      for (int p = 0; p < hw; ++p) {
        if (m[p] == 0.0f) {
          dst[c * hw + p] = src[c * hw + p];
        } else {
          switch (mode) {
            case BackgroundMode::ground_truth:
              dst[c * hw + p] = clean_plate->frame(i)[c * hw + p];
              break;
            case BackgroundMode::temporal_median:
              dst[c * hw + p] = median[static_cast<size_t>(c) * hw + p];
              break;
            case BackgroundMode::constant_fill:
              dst[c * hw + p] = fill_gray;
              break;
          }
        }
      }
    }
  }
  return out;
}

VideoTensor alpha_blend(const ArmVideo& arm, const BackgroundVideo& bkg,
                        const MaskSequence& masks) {
  require_match(arm.video, masks, "alpha_blend");
  require_match(bkg.video, masks, "alpha_blend");
  const int n = masks.frames(), hw = masks.height() * masks.width();
  VideoTensor out(n, masks.height(), masks.width(), arm.video.fps);
  for (int i = 0; i < n; ++i) {
    const float* a = arm.video.frame(i);
    const float* b = bkg.video.frame(i);
    const float* m = masks.frame(i);
    float* dst = out.frame(i);
    for (int c = 0; c < 3; ++c)
      for (int p = 0; p < hw; ++p)
        dst[c * hw + p] = m[p] * a[c * hw + p] + (1.0f - m[p]) * b[c * hw + p];
  }
  return out;
}

MaskSequence support_mask(const VideoTensor& arm, float luma_threshold) {
  const int n = arm.frames(), h = arm.height(), w = arm.width();
  const int hw = h * w;
  MaskSequence out(n, h, w);
  for (int i = 0; i < n; ++i) {
    const float* f = arm.frame(i);
    float* m = out.frame(i);
    for (int p = 0; p < hw; ++p) {
      const float y = luminance(f[p], f[hw + p], f[2 * hw + p]);
      m[p] = y > luma_threshold ? 1.0f : 0.0f;
    }
  }
  return out;
}

}  // namespace roboswap
