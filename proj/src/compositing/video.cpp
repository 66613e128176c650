#include "roboswap/compositing/video.hpp"

#include <cmath>

#include "roboswap/core/error.hpp"

namespace roboswap {

void VideoTensor::validate() const {
  if (data.ndim() != 4 || data.dim(1) != 3)
    throw InvalidArgument("VideoTensor: expected [N,3,H,W], got " + data.shape_str());
  if (data.dim(0) < 1) throw InvalidArgument("VideoTensor: need at least one frame");
  for (int64_t i = 0; i < data.numel(); ++i)
    if (!(data[i] >= 0.0f && data[i] <= 1.0f))
      throw InvalidArgument("VideoTensor: value outside [0,1]");
}

void MaskSequence::validate() const {
  if (data.ndim() != 3) throw InvalidArgument("MaskSequence: expected [N,H,W]");
  for (int64_t i = 0; i < data.numel(); ++i)
    if (data[i] != 0.0f && data[i] != 1.0f)
      throw InvalidArgument("MaskSequence: mask must be strictly binary");
}

MaskSequence MaskSequence::dilated(int radius_px) const {
  const int n = frames(), h = height(), w = width();
  MaskSequence out(n, h, w);
  for (int i = 0; i < n; ++i) {
    const float* src = frame(i);
    float* dst = out.frame(i);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        float v = 0.0f;
        for (int dy = -radius_px; dy <= radius_px && v == 0.0f; ++dy) {
          const int yy = y + dy;
          if (yy < 0 || yy >= h) continue;
          for (int dx = -radius_px; dx <= radius_px; ++dx) {
            const int xx = x + dx;
            if (xx < 0 || xx >= w) continue;
            if (src[yy * w + xx] != 0.0f) {
              v = 1.0f;
              break;
            }
          }
        }
        dst[y * w + x] = v;
      }
    }
  }
  return out;
}

bool MaskSequence::empty_frame(int i) const {
  const float* src = frame(i);
  const int hw = height() * width();
  for (int p = 0; p < hw; ++p)
    if (src[p] != 0.0f) return false;
  return true;
}

ImageU8 frame_to_image(const VideoTensor& v, int i) {
  const int h = v.height(), w = v.width();
  ImageU8 img;
  img.h = h;
  img.w = w;
  img.channels = 3;
  img.data.resize(static_cast<size_t>(h) * w * 3);
  const float* f = v.frame(i);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const float val = f[(c * h + y) * w + x];
        const float clamped = val < 0.0f ? 0.0f : (val > 1.0f ? 1.0f : val);
        img.at(y, x, c) = static_cast<uint8_t>(std::lround(clamped * 255.0f));
      }
  return img;
}

void image_to_frame(const ImageU8& img, VideoTensor& v, int i) {
  if (img.channels != 3) throw InvalidArgument("image_to_frame: expected RGB image");
  if (img.h != v.height() || img.w != v.width())
    throw InvalidArgument("image_to_frame: size mismatch");
  float* f = v.frame(i);
  const int h = img.h, w = img.w;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) f[(c * h + y) * w + x] = img.at(y, x, c) / 255.0f;
}

ImageU8 mask_to_image(const MaskSequence& m, int i) {
  const int h = m.height(), w = m.width();
  ImageU8 img;
  img.h = h;
  img.w = w;
  img.channels = 1;
  img.data.resize(static_cast<size_t>(h) * w);
  const float* f = m.frame(i);
  for (int p = 0; p < h * w; ++p) img.data[p] = f[p] != 0.0f ? 255 : 0;
  return img;
}

void image_to_mask(const ImageU8& img, MaskSequence& m, int i) {
  if (img.channels != 1) throw InvalidArgument("image_to_mask: expected gray image");
  if (img.h != m.height() || img.w != m.width())
    throw InvalidArgument("image_to_mask: size mismatch");
  float* f = m.frame(i);
  for (int p = 0; p < img.h * img.w; ++p) {
    if (img.data[p] != 0 && img.data[p] != 255)
      throw InvalidArgument("image_to_mask: mask PNG must contain only 0 and 255");
    f[p] = img.data[p] == 255 ? 1.0f : 0.0f;
  }
}

}  // namespace roboswap
