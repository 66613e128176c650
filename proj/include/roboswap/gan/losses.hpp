#pragma once

#include "roboswap/gan/config.hpp"
#include "roboswap/gan/networks.hpp"

namespace roboswap::gan {

struct AdvLossResult {
  double loss_d = 0.0;
  double loss_g = 0.0;
};

// d_real/d_fake are discriminator output maps. least_squares reads them as
// raw values: loss_D = E(D(y)-1)^2 + E D(G(x))^2, loss_G = E(D(G(x))-1)^2.
// nonsaturating_log reads them as logits through a sigmoid:
// loss_D = -(E log D(y) + E log(1-D(G(x)))), loss_G = -E log D(G(x)).
// Optional gradients: w.r.t. d_real and d_fake for the D objective, and
// w.r.t. d_fake for the G objective.
AdvLossResult adversarial_loss(const Tensor& d_real, const Tensor& d_fake, AdvMode mode,
                               Tensor* gd_real = nullptr, Tensor* gd_fake_d = nullptr,
                               Tensor* gd_fake_g = nullptr);

// E|x_cyc - x|_1 + E|y_cyc - y|_1 (elementwise means).
double cycle_loss(const Tensor& x, const Tensor& x_cyc, const Tensor& y, const Tensor& y_cyc,
                  Tensor* gx_cyc = nullptr, Tensor* gy_cyc = nullptr);

// Sampled local features for contrastive matching. Vectors are L2-normalized
// inside the loss; the positive never appears among its query's negatives.
struct PatchFeatureSet {
  Tensor queries;    // [M, D]
  Tensor positives;  // [M, D]
  Tensor negatives;  // [M, K, D]
  float temperature = 0.07f;
};

// Cross-entropy of the positive under softmax over {positive} + negatives.
double patchnce_loss(const PatchFeatureSet& f, Tensor* gq = nullptr, Tensor* gpos = nullptr,
                     Tensor* gneg = nullptr);

struct CycleGanLossBreakdown {
  double adv_ab_g = 0, adv_ab_d = 0, adv_ba_g = 0, adv_ba_d = 0;
  double cycle = 0, identity = 0;
  double total_g = 0, total_d = 0;
};

// Evaluation-only breakdown on a batch pair (no gradients).
CycleGanLossBreakdown total_cyclegan_loss(const Tensor& batch_a, const Tensor& batch_b,
                                          const Generator& g_ab, const Generator& g_ba,
                                          const Discriminator& d_a, const Discriminator& d_b,
                                          const GanConfig& cfg);

struct CutLossBreakdown {
  double adv_g = 0, adv_d = 0, nce = 0;
  double total_g = 0, total_d = 0;
};

CutLossBreakdown total_cut_loss(const Tensor& batch_a, const Tensor& batch_b,
                                const Generator& g, const Discriminator& d_b,
                                const PatchFeatureSet& feats, const GanConfig& cfg);

}  // namespace roboswap::gan
