#pragma once

#include <string>
#include <utility>
#include <vector>

#include "roboswap/core/json_util.hpp"
#include "roboswap/core/tensor.hpp"

namespace roboswap::nn {

// Versioned binary container: JSON header followed by raw float32 blobs.
// Loading verifies the magic, version and (by the owner) the architecture
// hash, so checkpoints never silently load into a mismatched network.
struct Checkpoint {
  static constexpr uint32_t kVersion = 1;

  std::string kind;       // "gan" | "vae" | "diffusion" | "classifier"
  std::string arch_hash;  // hex digest of the architecture descriptor
  Json config;            // the config the run was started with
  Json extra;             // free-form metadata (rng state, latent scale, ...)
  int64_t step = 0;
  std::vector<std::pair<std::string, Tensor>> tensors;

  void add(const std::string& name, const Tensor& t) { tensors.emplace_back(name, t); }

  bool has(const std::string& name) const {
    for (const auto& [n, t] : tensors)
      if (n == name) return true;
    return false;
  }

  const Tensor& tensor(const std::string& name) const {
    for (const auto& [n, t] : tensors)
      if (n == name) return t;
    throw MissingData("checkpoint: no tensor named '" + name + "'");
  }

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);
};

}  // namespace roboswap::nn
