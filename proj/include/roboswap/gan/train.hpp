#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roboswap/compositing/ops.hpp"
#include "roboswap/gan/losses.hpp"
#include "roboswap/nn/checkpoint.hpp"

namespace roboswap::gan {

// Writes crop_%05d.png training images for one domain of a clip dataset.
// arm_crop: mask-bounding-box crops of the extracted arm (resized).
// full_frame: whole frames resized (used by the whole-frame ablation model).
void prepare_crops(const std::string& dataset_root, const std::string& domain, int count,
                   int resolution, CropScope scope, const std::string& out_dir);

std::vector<Tensor> load_crop_dir(const std::string& dir);

// Both generators/discriminators, their optimizer state, replay buffers and
// the step-derived RNG make up the training state; checkpoints capture all of
// it so resumed runs reproduce uninterrupted ones exactly.
struct TrainResult {
  std::string final_checkpoint;
  std::vector<double> epoch_total_g;  // per-epoch averages, also in the CSV log
  std::vector<double> epoch_total_d;
  std::vector<double> epoch_cycle_or_nce;
  std::vector<double> epoch_adv_g;
};

TrainResult train_gan(const std::string& dataset_a_dir, const std::string& dataset_b_dir,
                      const GanConfig& cfg, GanVariant variant, const std::string& out_dir,
                      const std::string& resume_ckpt = "");

// Loads generators from a training checkpoint. direction "A2B" or "B2A".
struct LoadedGan {
  std::unique_ptr<Generator> g_ab;
  std::unique_ptr<Generator> g_ba;  // null for cut
  GanConfig cfg;
  GanVariant variant = GanVariant::cyclegan;
};
LoadedGan load_gan(const std::string& ckpt_path);

std::string gan_arch_hash(const GanConfig& cfg, GanVariant variant);

}  // namespace roboswap::gan
