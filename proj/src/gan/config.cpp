#include "roboswap/gan/config.hpp"

#include "roboswap/core/error.hpp"

namespace roboswap::gan {

std::string to_string(AdvMode m) {
  return m == AdvMode::least_squares ? "least_squares" : "nonsaturating_log";
}

AdvMode adv_mode_from_string(const std::string& s) {
  if (s == "least_squares") return AdvMode::least_squares;
  if (s == "nonsaturating_log") return AdvMode::nonsaturating_log;
  throw InvalidArgument("unknown adv_mode '" + s + "'");
}

std::string to_string(GanVariant v) { return v == GanVariant::cyclegan ? "cyclegan" : "cut"; }

GanVariant variant_from_string(const std::string& s) {
  if (s == "cyclegan") return GanVariant::cyclegan;
  if (s == "cut") return GanVariant::cut;
  throw InvalidArgument("unknown gan variant '" + s + "'");
}

void GanConfig::validate() const {
  if (cycle_weight < 0 || nce_weight < 0 || identity_loss_weight < 0)
    throw InvalidArgument("GanConfig: loss weights must be >= 0");
  if (epochs < 1) throw InvalidArgument("GanConfig: epochs must be >= 1");
  if (image_buffer_size < 1) throw InvalidArgument("GanConfig: image_buffer_size must be >= 1");
  if (crop_resolution % 4 != 0)
    throw InvalidArgument("GanConfig: crop_resolution must be divisible by 4");
  if (nce_temperature <= 0) throw InvalidArgument("GanConfig: nce_temperature must be > 0");
}

Json GanConfig::to_json() const {
  Json j;
  j["cycle_weight"] = cycle_weight;
  j["nce_weight"] = nce_weight;
  j["identity_loss_weight"] = identity_loss_weight;
  j["adv_mode"] = to_string(adv_mode);
  j["lr"] = lr;
  j["beta1"] = beta1;
  j["beta2"] = beta2;
  j["epochs"] = epochs;
  j["image_buffer_size"] = image_buffer_size;
  j["base_width"] = base_width;
  j["n_residual_blocks"] = n_residual_blocks;
  j["d_base_width"] = d_base_width;
  j["d_layers"] = d_layers;
  j["crop_resolution"] = crop_resolution;
  j["crops_per_domain"] = crops_per_domain;
  j["nce_temperature"] = nce_temperature;
  j["nce_patches"] = nce_patches;
  j["checkpoint_every"] = checkpoint_every;
  j["seed"] = seed;
  return j;
}

GanConfig GanConfig::from_json(const Json& j) {
  reject_unknown_keys(j,
                      {"cycle_weight", "nce_weight", "identity_loss_weight", "adv_mode", "lr",
                       "beta1", "beta2", "epochs", "image_buffer_size", "base_width",
                       "n_residual_blocks", "d_base_width", "d_layers", "crop_resolution",
                       "crops_per_domain", "nce_temperature", "nce_patches", "checkpoint_every",
                       "seed", "variant"},
                      "gan config");
  GanConfig c;
  c.cycle_weight = json_get(j, "cycle_weight", c.cycle_weight);
  c.nce_weight = json_get(j, "nce_weight", c.nce_weight);
  c.identity_loss_weight = json_get(j, "identity_loss_weight", c.identity_loss_weight);
  if (j.contains("adv_mode")) c.adv_mode = adv_mode_from_string(j.at("adv_mode"));
  c.lr = json_get(j, "lr", c.lr);
  c.beta1 = json_get(j, "beta1", c.beta1);
  c.beta2 = json_get(j, "beta2", c.beta2);
  c.epochs = json_get(j, "epochs", c.epochs);
  c.image_buffer_size = json_get(j, "image_buffer_size", c.image_buffer_size);
  c.base_width = json_get(j, "base_width", c.base_width);
  c.n_residual_blocks = json_get(j, "n_residual_blocks", c.n_residual_blocks);
  c.d_base_width = json_get(j, "d_base_width", c.d_base_width);
  c.d_layers = json_get(j, "d_layers", c.d_layers);
  c.crop_resolution = json_get(j, "crop_resolution", c.crop_resolution);
  c.crops_per_domain = json_get(j, "crops_per_domain", c.crops_per_domain);
  c.nce_temperature = json_get(j, "nce_temperature", c.nce_temperature);
  c.nce_patches = json_get(j, "nce_patches", c.nce_patches);
  c.checkpoint_every = json_get(j, "checkpoint_every", c.checkpoint_every);
  c.seed = json_get(j, "seed", c.seed);
  c.validate();
  return c;
}

}  // namespace roboswap::gan
