#pragma once

#include <string>
#include <vector>

#include "roboswap/datagen/types.hpp"

namespace roboswap::datagen {

// On-disk clip layout inside one clip directory:
//   frame_%04d.png, mask_%04d.png, background_%04d.png,
//   trajectory.json, scene.json
void save_clip(const RenderedClip& clip, const std::string& dir, double fps = 8.0);
RenderedClip load_clip(const std::string& dir);

// <root>/<domain>/clip_%05d/... plus an updated <root>/manifest.json entry.
// Refuses to overwrite a non-empty domain directory unless force is set.
void build_dataset(Domain domain, int n_clips, int n_frames, int frame_h, int frame_w,
                   uint64_t seed, const std::string& root, bool force = false, double fps = 8.0);

// Evaluation split: <root>/eval/clip_%05d/{source,oracle}/... where source is
// a domain-A clip and oracle is the retargeted domain-B rendering.
void build_eval_split(int n_clips, int n_frames, int frame_h, int frame_w, uint64_t seed,
                      const std::string& root, bool force = false, double fps = 8.0);

std::vector<std::string> list_clip_dirs(const std::string& domain_dir);

std::string clip_dir_name(int index);

}  // namespace roboswap::datagen
