#pragma once

#include <optional>

#include "roboswap/compositing/video.hpp"

namespace roboswap {

enum class BackgroundMode { ground_truth, temporal_median, constant_fill };

ArmVideo extract_arm(const VideoTensor& video, const MaskSequence& masks);

// ground_truth needs the clip's clean plate; constant_fill uses `fill_gray`.
BackgroundVideo extract_background(const VideoTensor& video, const MaskSequence& masks,
                                   BackgroundMode mode,
                                   const VideoTensor* clean_plate = nullptr,
                                   float fill_gray = 0.5f);

// out = m*arm + (1-m)*bkg; with binary masks this selects exactly.
VideoTensor alpha_blend(const ArmVideo& arm, const BackgroundVideo& bkg,
                        const MaskSequence& masks);

// Support of a (possibly translated) arm stream: luma > threshold.
MaskSequence support_mask(const VideoTensor& arm, float luma_threshold = 0.02f);

}  // namespace roboswap
