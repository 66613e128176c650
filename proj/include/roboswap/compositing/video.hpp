#pragma once

#include "roboswap/core/image.hpp"
#include "roboswap/core/tensor.hpp"

namespace roboswap {

// N-frame RGB clip, values in [0,1], layout [N,3,H,W].
struct VideoTensor {
  Tensor data;
  double fps = 8.0;

  VideoTensor() = default;
  VideoTensor(int n, int h, int w, double fps_ = 8.0) : data({n, 3, h, w}), fps(fps_) {}

  int frames() const { return data.empty() ? 0 : data.dim(0); }
  int height() const { return data.dim(2); }
  int width() const { return data.dim(3); }

  float* frame(int i) { return data.data() + static_cast<int64_t>(i) * 3 * height() * width(); }
  const float* frame(int i) const {
    return data.data() + static_cast<int64_t>(i) * 3 * height() * width();
  }

  void validate() const;
};

// Per-frame binary masks, layout [N,H,W], values exactly 0 or 1.
struct MaskSequence {
  Tensor data;

  MaskSequence() = default;
  MaskSequence(int n, int h, int w) : data({n, h, w}) {}

  int frames() const { return data.empty() ? 0 : data.dim(0); }
  int height() const { return data.dim(1); }
  int width() const { return data.dim(2); }

  float* frame(int i) { return data.data() + static_cast<int64_t>(i) * height() * width(); }
  const float* frame(int i) const {
    return data.data() + static_cast<int64_t>(i) * height() * width();
  }

  void validate() const;

  // 4-px dilation is the convention for "outside the arm" regions.
  MaskSequence dilated(int radius_px) const;
  bool empty_frame(int i) const;
};

// Role-tagged wrappers. An ArmVideo is zero outside its originating mask.
struct ArmVideo {
  VideoTensor video;
};
struct BackgroundVideo {
  VideoTensor video;
};

// Frame <-> 8-bit image conversion used by every on-disk format.
ImageU8 frame_to_image(const VideoTensor& v, int i);
void image_to_frame(const ImageU8& img, VideoTensor& v, int i);
ImageU8 mask_to_image(const MaskSequence& m, int i);
void image_to_mask(const ImageU8& img, MaskSequence& m, int i);

// Rec.601 luma of one pixel.
inline float luminance(float r, float g, float b) {
  return 0.299f * r + 0.587f * g + 0.114f * b;
}

}  // namespace roboswap
