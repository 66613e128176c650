#pragma once

#include "roboswap/nn/ops.hpp"
#include "roboswap/nn/param.hpp"

namespace roboswap::nn {

enum class Act { none, relu, lrelu02, sigmoid, tanh_, silu };

// conv2d -> optional instance norm -> activation, with a cache-based
// backward. The building block of every network here.
struct Unit {
  Param* w = nullptr;
  Param* b = nullptr;
  Param* gamma = nullptr;  // instance norm when gamma/beta set
  Param* beta = nullptr;
  int stride = 1, pad = 1;
  Act act = Act::relu;
};

struct UnitCache {
  Tensor x;       // conv input
  InstanceNormCache nc;
  Tensor preact;  // activation input
  Tensor out;     // activation output (sigmoid/tanh backward)
};

Tensor unit_forward(const Unit& u, const Tensor& x, UnitCache* c);
// Accumulates parameter grads, returns grad w.r.t. the unit input.
Tensor unit_backward(const Unit& u, UnitCache& c, const Tensor& gy);

}  // namespace roboswap::nn
