#pragma once

#include <deque>
#include <string>
#include <vector>

#include "roboswap/core/rng.hpp"
#include "roboswap/core/tensor.hpp"

namespace roboswap::nn {

struct Param {
  std::string name;
  Tensor v;  // value
  Tensor g;  // gradient, same shape
  bool trainable = true;

  void zero_grad() { std::fill(g.raw().begin(), g.raw().end(), 0.0f); }
};

using ParamRefs = std::vector<Param*>;

// Owns parameters with stable addresses; networks register members here.
class ParamStore {
 public:
  Param& add(const std::string& name, std::vector<int> shape) {
    store_.emplace_back();
    Param& p = store_.back();
    p.name = name;
    p.v = Tensor(shape);
    p.g = Tensor(std::move(shape));
    return p;
  }

  ParamRefs all() {
    ParamRefs refs;
    for (auto& p : store_) refs.push_back(&p);
    return refs;
  }

  ParamRefs trainable() {
    ParamRefs refs;
    for (auto& p : store_)
      if (p.trainable) refs.push_back(&p);
    return refs;
  }

  Param* find(const std::string& name) {
    for (auto& p : store_)
      if (p.name == name) return &p;
    return nullptr;
  }

  void zero_grads() {
    for (auto& p : store_) p.zero_grad();
  }

 private:
  std::deque<Param> store_;
};

// Uniform fan-in init, the convnet default.
inline void init_fan_in(Param& p, Rng& rng, int fan_in) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in > 0 ? fan_in : 1));
  for (auto& w : p.v.raw()) w = static_cast<float>(rng.uniform(-bound, bound));
}

inline void init_conv(Param& w, Param* b, Rng& rng) {
  const int fan_in = w.v.dim(1) * w.v.dim(2) * w.v.dim(3);
  init_fan_in(w, rng, fan_in);
  if (b) init_fan_in(*b, rng, fan_in);
}

inline void init_linear(Param& w, Param* b, Rng& rng) {
  const int fan_in = w.v.dim(1);
  init_fan_in(w, rng, fan_in);
  if (b) init_fan_in(*b, rng, fan_in);
}

inline void init_normal(Param& p, Rng& rng, double stddev) {
  for (auto& w : p.v.raw()) w = static_cast<float>(rng.normal() * stddev);
}

inline void init_const(Param& p, float v) {
  std::fill(p.v.raw().begin(), p.v.raw().end(), v);
}

}  // namespace roboswap::nn
