#pragma once

#include "roboswap/compositing/ops.hpp"
#include "roboswap/gan/networks.hpp"

namespace roboswap::gan {

struct CropPolicy {
  int dilation_px = 4;
  int resolution = 64;          // generator input size
  float support_luma = 0.02f;   // translated-arm support threshold
};

struct TranslatedArm {
  ArmVideo arm;           // translated arm stream, zero outside support
  MaskSequence support;   // luma-threshold support of the translated arm
};

// Frame by frame: crop the arm's bounding box (dilated), resize to the
// generator resolution, translate, resize back, paste, then re-zero outside
// the translated-arm support. Empty frames pass through as all-zero.
TranslatedArm translate_video(const Generator& gen, const ArmVideo& arm,
                              const CropPolicy& policy = {});

// Same plumbing with an arbitrary per-crop image map; lets tests and
// ablations run the pipeline with stub translators.
using TranslateFn = std::function<Tensor(const Tensor&)>;  // [1,3,r,r] -> [1,3,r,r]
TranslatedArm translate_video_fn(const TranslateFn& fn, const ArmVideo& arm,
                                 const CropPolicy& policy = {});

}  // namespace roboswap::gan
