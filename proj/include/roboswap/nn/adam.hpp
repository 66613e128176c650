#pragma once

#include <cmath>
#include <vector>

#include "roboswap/nn/param.hpp"

namespace roboswap::nn {

// Adam over a fixed parameter list. First/second moments are part of
// training state and serialize into checkpoints.
class Adam {
 public:
  Adam(ParamRefs params, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (auto* p : params_) {
      m_.emplace_back(p->v.shape());
      v_.emplace_back(p->v.shape());
    }
  }

  void set_lr_scale(double s) { lr_scale_ = s; }
  double lr_scale() const { return lr_scale_; }
  int64_t step_count() const { return t_; }

  void step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    const float lr = static_cast<float>(lr_ * lr_scale_);
    for (size_t i = 0; i < params_.size(); ++i) {
      Param& p = *params_[i];
      if (!p.trainable) continue;
      float* m = m_[i].data();
      float* v = v_[i].data();
      float* w = p.v.data();
      const float* g = p.g.data();
      const float b1 = static_cast<float>(beta1_), b2 = static_cast<float>(beta2_);
      const float ib1 = 1.0f - b1, ib2 = 1.0f - b2;
      const float ibc1 = static_cast<float>(1.0 / bc1), ibc2 = static_cast<float>(1.0 / bc2);
      const float eps = static_cast<float>(eps_);
      const int64_t n = p.v.numel();
      for (int64_t j = 0; j < n; ++j) {
        m[j] = b1 * m[j] + ib1 * g[j];
        v[j] = b2 * v[j] + ib2 * g[j] * g[j];
        const float mhat = m[j] * ibc1;
        const float vhat = v[j] * ibc2;
        w[j] -= lr * mhat / (std::sqrt(vhat) + eps);
      }
    }
  }

  // State access for checkpointing (one m/v tensor per param, param order).
  std::vector<Tensor>& moment1() { return m_; }
  std::vector<Tensor>& moment2() { return v_; }
  void set_step_count(int64_t t) { t_ = t; }

 private:
  ParamRefs params_;
  std::vector<Tensor> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  double lr_scale_ = 1.0;
  int64_t t_ = 0;
};

}  // namespace roboswap::nn
