#include "roboswap/gan/translate.hpp"

#include "roboswap/compositing/warp.hpp"

namespace roboswap::gan {

TranslatedArm translate_video_fn(const TranslateFn& fn, const ArmVideo& arm,
                                 const CropPolicy& policy) {
  const int n = arm.video.frames(), h = arm.video.height(), w = arm.video.width();
  const int hw = h * w;
  TranslatedArm out;
  out.arm.video = VideoTensor(n, h, w, arm.video.fps);
  out.support = MaskSequence(n, h, w);

  for (int i = 0; i < n; ++i) {
    const float* src = arm.video.frame(i);
    // support of the source arm (nonzero anywhere across channels)
    Tensor any({h, w});
    for (int p = 0; p < hw; ++p)
      any[p] = (src[p] != 0.0f || src[hw + p] != 0.0f || src[2 * hw + p] != 0.0f) ? 1.0f : 0.0f;
    const PixelBox box = nonzero_box(any.data(), h, w);
    if (box.empty()) continue;  // all-zero frame passes through as all-zero

    const PixelBox d = box.dilated(policy.dilation_px, h, w);
    Tensor crop({3, d.height(), d.width()});
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < d.height(); ++y)
        for (int x = 0; x < d.width(); ++x)
          crop.at3(c, y, x) = src[c * hw + (d.y0 + y) * w + (d.x0 + x)];

    const Tensor resized = resize_bilinear(crop, policy.resolution, policy.resolution);
    Tensor batch({1, 3, policy.resolution, policy.resolution});
    std::copy(resized.data(), resized.data() + resized.numel(), batch.data());
    const Tensor translated = fn(batch);
    Tensor img({3, policy.resolution, policy.resolution});
    std::copy(translated.data(), translated.data() + img.numel(), img.data());
    const Tensor back = resize_bilinear(img, d.height(), d.width());

    float* dst = out.arm.video.frame(i);
    float* sup = out.support.frame(i);
    for (int y = 0; y < d.height(); ++y)
      for (int x = 0; x < d.width(); ++x) {
        const int p = (d.y0 + y) * w + (d.x0 + x);
        const float r = back.at3(0, y, x), g = back.at3(1, y, x), b = back.at3(2, y, x);
        if (luminance(r, g, b) > policy.support_luma) {
          sup[p] = 1.0f;
          dst[p] = r;
          dst[hw + p] = g;
          dst[2 * hw + p] = b;
        }
      }
  }
  return out;
}

TranslatedArm translate_video(const Generator& gen, const ArmVideo& arm,
                              const CropPolicy& policy) {
  return translate_video_fn([&gen](const Tensor& x) { return gen.forward(x); }, arm, policy);
}

}  // namespace roboswap::gan
