#pragma once

#include <string>
#include <vector>

#include "roboswap/nn/unit.hpp"

namespace roboswap::gan {

using nn::Param;
using nn::ParamStore;
using roboswap::Tensor;

// Encoder / residual / decoder image network. Output bounded to [0,1] by a
// sigmoid head; spatial size preserved for H,W divisible by 4.
class Generator {
 public:
  struct Tape {
    nn::UnitCache stem, down1, down2, up1c, up2c, head;
    std::vector<nn::UnitCache> res;           // 2 per block
    std::vector<Tensor> res_in;               // block inputs (skip path)
    Tensor up1_in, up2_in;                    // upsample inputs
  };

  Generator(int base_width, int n_residual_blocks, const std::string& direction, Rng& rng);

  Tensor forward(const Tensor& x, Tape* tape = nullptr) const;
  // Accumulates parameter grads; returns grad w.r.t. input.
  Tensor backward(Tape& tape, const Tensor& gy);

  // Encoder activations for contrastive feature matching: after each
  // downsample and after every second residual block.
  struct EncoderTape {
    nn::UnitCache stem, down1, down2;
    std::vector<nn::UnitCache> res;
    std::vector<Tensor> res_in;
    int n_blocks_used = 0;
  };
  std::vector<Tensor> encoder_features(const Tensor& x, EncoderTape* tape = nullptr) const;
  Tensor encoder_backward(EncoderTape& tape, const std::vector<Tensor>& feature_grads);

  ParamStore& params() { return store_; }
  const std::string& direction() const { return direction_; }
  int base_width() const { return base_; }
  int residual_blocks() const { return blocks_; }
  std::string arch_desc() const;

 private:
  ParamStore store_;
  int base_, blocks_;
  std::string direction_;
  nn::Unit stem_, down1_, down2_, up1_, up2_, head_;
  std::vector<nn::Unit> res_;  // 2 units per block
};

// Patch discriminator: spatial logit map, no global pooling.
class Discriminator {
 public:
  struct Tape {
    std::vector<nn::UnitCache> units;
  };

  Discriminator(int base_width, int n_layers, Rng& rng);

  Tensor forward(const Tensor& x, Tape* tape = nullptr) const;
  Tensor backward(Tape& tape, const Tensor& gy);

  ParamStore& params() { return store_; }
  int receptive_field_px() const { return receptive_field_; }
  std::string arch_desc() const;

 private:
  ParamStore store_;
  int base_, layers_, receptive_field_ = 0;
  std::vector<nn::Unit> units_;
};

}  // namespace roboswap::gan
