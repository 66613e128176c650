#pragma once

#include <string>

#include "roboswap/core/json_util.hpp"

namespace roboswap::gan {

enum class AdvMode { least_squares, nonsaturating_log };
enum class GanVariant { cyclegan, cut };
enum class CropScope { arm_crop, full_frame };

std::string to_string(AdvMode m);
AdvMode adv_mode_from_string(const std::string& s);
std::string to_string(GanVariant v);
GanVariant variant_from_string(const std::string& s);

struct GanConfig {
  float cycle_weight = 10.0f;
  float nce_weight = 1.0f;
  float identity_loss_weight = 0.0f;
  AdvMode adv_mode = AdvMode::least_squares;
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  int epochs = 30;
  int image_buffer_size = 50;

  int base_width = 8;
  int n_residual_blocks = 4;
  int d_base_width = 16;
  int d_layers = 3;
  int crop_resolution = 64;
  int crops_per_domain = 200;
  float nce_temperature = 0.07f;
  int nce_patches = 64;
  int checkpoint_every = 10;
  uint64_t seed = 0;

  void validate() const;
  Json to_json() const;
  static GanConfig from_json(const Json& j);
};

}  // namespace roboswap::gan
