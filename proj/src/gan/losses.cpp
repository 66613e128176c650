#include "roboswap/gan/losses.hpp"

#include <cmath>

namespace roboswap::gan {

namespace {

void require_finite(const Tensor& t, const char* what) {
  for (int64_t i = 0; i < t.numel(); ++i)
    if (!std::isfinite(t[i])) throw NumericError(std::string(what) + ": non-finite logits");
}

double mean_of(const Tensor& t, float shift, int power) {
  double acc = 0.0;
  for (int64_t i = 0; i < t.numel(); ++i) {
    const double v = static_cast<double>(t[i]) - shift;
    acc += power == 2 ? v * v : v;
  }
  return acc / static_cast<double>(t.numel());
}

}  // namespace

AdvLossResult adversarial_loss(const Tensor& d_real, const Tensor& d_fake, AdvMode mode,
                               Tensor* gd_real, Tensor* gd_fake_d, Tensor* gd_fake_g) {
  require_finite(d_real, "adversarial_loss");
  require_finite(d_fake, "adversarial_loss");
  AdvLossResult r;
  const double nr = static_cast<double>(d_real.numel());
  const double nf = static_cast<double>(d_fake.numel());

  if (mode == AdvMode::least_squares) {
    r.loss_d = mean_of(d_real, 1.0f, 2) + mean_of(d_fake, 0.0f, 2);
    r.loss_g = mean_of(d_fake, 1.0f, 2);
    if (gd_real) {
      *gd_real = Tensor(d_real.shape());
      for (int64_t i = 0; i < d_real.numel(); ++i)
        (*gd_real)[i] = static_cast<float>(2.0 * (d_real[i] - 1.0f) / nr);
    }
    if (gd_fake_d) {
      *gd_fake_d = Tensor(d_fake.shape());
      for (int64_t i = 0; i < d_fake.numel(); ++i)
        (*gd_fake_d)[i] = static_cast<float>(2.0 * d_fake[i] / nf);
    }
    if (gd_fake_g) {
      *gd_fake_g = Tensor(d_fake.shape());
      for (int64_t i = 0; i < d_fake.numel(); ++i)
        (*gd_fake_g)[i] = static_cast<float>(2.0 * (d_fake[i] - 1.0f) / nf);
    }
    return r;
  }

  // nonsaturating_log on logits
  double acc_real = 0.0, acc_fake = 0.0, acc_g = 0.0;
  for (int64_t i = 0; i < d_real.numel(); ++i) {
    const double x = d_real[i];
    // -log sigmoid(x) = log(1 + exp(-x)), stable form
    acc_real += x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
  }
  for (int64_t i = 0; i < d_fake.numel(); ++i) {
    const double x = d_fake[i];
    // -log(1 - sigmoid(x)) = x + log(1 + exp(-x))
    acc_fake += x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    acc_g += x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
  }
  r.loss_d = acc_real / nr + acc_fake / nf;
  r.loss_g = acc_g / nf;
  if (gd_real) {
    *gd_real = Tensor(d_real.shape());
    for (int64_t i = 0; i < d_real.numel(); ++i) {
      const double s = 1.0 / (1.0 + std::exp(-static_cast<double>(d_real[i])));
      (*gd_real)[i] = static_cast<float>((s - 1.0) / nr);
    }
  }
  if (gd_fake_d) {
    *gd_fake_d = Tensor(d_fake.shape());
    for (int64_t i = 0; i < d_fake.numel(); ++i) {
      const double s = 1.0 / (1.0 + std::exp(-static_cast<double>(d_fake[i])));
      (*gd_fake_d)[i] = static_cast<float>(s / nf);
    }
  }
  if (gd_fake_g) {
    *gd_fake_g = Tensor(d_fake.shape());
    for (int64_t i = 0; i < d_fake.numel(); ++i) {
      const double s = 1.0 / (1.0 + std::exp(-static_cast<double>(d_fake[i])));
      (*gd_fake_g)[i] = static_cast<float>((s - 1.0) / nf);
    }
  }
  return r;
}

double cycle_loss(const Tensor& x, const Tensor& x_cyc, const Tensor& y, const Tensor& y_cyc,
                  Tensor* gx_cyc, Tensor* gy_cyc) {
  require_same_shape(x, x_cyc, "cycle_loss");
  require_same_shape(y, y_cyc, "cycle_loss");
  const double loss = nn::mean_abs(x_cyc, x) + nn::mean_abs(y_cyc, y);
  if (gx_cyc) *gx_cyc = nn::mean_abs_grad(x_cyc, x);
  if (gy_cyc) *gy_cyc = nn::mean_abs_grad(y_cyc, y);
  return loss;
}

double patchnce_loss(const PatchFeatureSet& f, Tensor* gq, Tensor* gpos, Tensor* gneg) {
  if (f.negatives.ndim() != 3 || f.negatives.dim(1) < 1)
    throw InvalidArgument("patchnce_loss: need at least one negative per query");
  const int m = f.queries.dim(0), d = f.queries.dim(1), k = f.negatives.dim(1);
  if (f.positives.dim(0) != m || f.positives.dim(1) != d || f.negatives.dim(0) != m ||
      f.negatives.dim(2) != d)
    throw InvalidArgument("patchnce_loss: feature shape mismatch");
  const double tau = f.temperature;
  if (tau <= 0.0) throw InvalidArgument("patchnce_loss: temperature must be > 0");

  if (gq) *gq = Tensor(f.queries.shape());
  if (gpos) *gpos = Tensor(f.positives.shape());
  if (gneg) *gneg = Tensor(f.negatives.shape());

  auto normalize = [d](const float* v, std::vector<double>& out) {
    double n2 = 0.0;
    for (int j = 0; j < d; ++j) n2 += static_cast<double>(v[j]) * v[j];
    const double n = std::sqrt(n2) + 1e-12;
    out.resize(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) out[static_cast<size_t>(j)] = v[j] / n;
    return n;
  };
  // d(u . g)/dx for u = x/|x|: (g - u (u.g)) / |x|
  auto backprop_norm = [d](const std::vector<double>& u, double norm,
                           const std::vector<double>& gu, float* gx) {
    double dot = 0.0;
    for (int j = 0; j < d; ++j) dot += u[static_cast<size_t>(j)] * gu[static_cast<size_t>(j)];
    for (int j = 0; j < d; ++j)
      gx[j] += static_cast<float>((gu[static_cast<size_t>(j)] - u[static_cast<size_t>(j)] * dot) /
                                  norm);
  };

  double loss = 0.0;
  std::vector<double> u, vpos, vneg, scores(static_cast<size_t>(k) + 1);
  std::vector<std::vector<double>> vnegs(static_cast<size_t>(k));
  for (int i = 0; i < m; ++i) {
    const double nq = normalize(f.queries.data() + static_cast<int64_t>(i) * d, u);
    const double np = normalize(f.positives.data() + static_cast<int64_t>(i) * d, vpos);
    double spos = 0.0;
    for (int j = 0; j < d; ++j) spos += u[static_cast<size_t>(j)] * vpos[static_cast<size_t>(j)];
    scores[0] = spos / tau;
    std::vector<double> nneg(static_cast<size_t>(k));
    for (int kk = 0; kk < k; ++kk) {
      nneg[static_cast<size_t>(kk)] =
          normalize(f.negatives.data() + (static_cast<int64_t>(i) * k + kk) * d,
                    vnegs[static_cast<size_t>(kk)]);
      double s = 0.0;
      for (int j = 0; j < d; ++j)
        s += u[static_cast<size_t>(j)] * vnegs[static_cast<size_t>(kk)][static_cast<size_t>(j)];
      scores[static_cast<size_t>(kk) + 1] = s / tau;
    }
    double mx = scores[0];
    for (double s : scores) mx = std::max(mx, s);
    double z = 0.0;
    for (double s : scores) z += std::exp(s - mx);
    const double logz = std::log(z) + mx;
    loss += logz - scores[0];

    if (gq || gpos || gneg) {
      // dL/ds_j = softmax_j - [j == 0], averaged over queries at the end
      std::vector<double> gs(static_cast<size_t>(k) + 1);
      for (size_t j = 0; j < gs.size(); ++j)
        gs[j] = std::exp(scores[j] - logz) - (j == 0 ? 1.0 : 0.0);

      std::vector<double> gu(static_cast<size_t>(d), 0.0);
      for (int j = 0; j < d; ++j)
        gu[static_cast<size_t>(j)] += gs[0] * vpos[static_cast<size_t>(j)] / tau;
      for (int kk = 0; kk < k; ++kk)
        for (int j = 0; j < d; ++j)
          gu[static_cast<size_t>(j)] += gs[static_cast<size_t>(kk) + 1] *
                                        vnegs[static_cast<size_t>(kk)][static_cast<size_t>(j)] /
                                        tau;
      for (auto& v : gu) v /= m;
      if (gq) backprop_norm(u, nq, gu, gq->data() + static_cast<int64_t>(i) * d);

      if (gpos) {
        std::vector<double> gv(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j)
          gv[static_cast<size_t>(j)] = gs[0] * u[static_cast<size_t>(j)] / (tau * m);
        backprop_norm(vpos, np, gv, gpos->data() + static_cast<int64_t>(i) * d);
      }
      if (gneg) {
        for (int kk = 0; kk < k; ++kk) {
          std::vector<double> gv(static_cast<size_t>(d));
          for (int j = 0; j < d; ++j)
            gv[static_cast<size_t>(j)] =
                gs[static_cast<size_t>(kk) + 1] * u[static_cast<size_t>(j)] / (tau * m);
          backprop_norm(vnegs[static_cast<size_t>(kk)], nneg[static_cast<size_t>(kk)], gv,
                        gneg->data() + (static_cast<int64_t>(i) * k + kk) * d);
        }
      }
    }
  }
  return loss / m;
}

CycleGanLossBreakdown total_cyclegan_loss(const Tensor& batch_a, const Tensor& batch_b,
                                          const Generator& g_ab, const Generator& g_ba,
                                          const Discriminator& d_a, const Discriminator& d_b,
                                          const GanConfig& cfg) {
  CycleGanLossBreakdown r;
  const Tensor fake_b = g_ab.forward(batch_a);
  const Tensor rec_a = g_ba.forward(fake_b);
  const Tensor fake_a = g_ba.forward(batch_b);
  const Tensor rec_b = g_ab.forward(fake_a);

  const auto adv_ab = adversarial_loss(d_b.forward(batch_b), d_b.forward(fake_b), cfg.adv_mode);
  const auto adv_ba = adversarial_loss(d_a.forward(batch_a), d_a.forward(fake_a), cfg.adv_mode);
  r.adv_ab_g = adv_ab.loss_g;
  r.adv_ab_d = adv_ab.loss_d;
  r.adv_ba_g = adv_ba.loss_g;
  r.adv_ba_d = adv_ba.loss_d;
  r.cycle = cycle_loss(batch_a, rec_a, batch_b, rec_b);
  if (cfg.identity_loss_weight > 0.0f) {
    const Tensor idt_b = g_ab.forward(batch_b);
    const Tensor idt_a = g_ba.forward(batch_a);
    r.identity = nn::mean_abs(idt_b, batch_b) + nn::mean_abs(idt_a, batch_a);
  }
  r.total_g = r.adv_ab_g + r.adv_ba_g + cfg.cycle_weight * r.cycle +
              cfg.identity_loss_weight * r.identity;
  r.total_d = r.adv_ab_d + r.adv_ba_d;
  return r;
}

CutLossBreakdown total_cut_loss(const Tensor& batch_a, const Tensor& batch_b,
                                const Generator& g, const Discriminator& d_b,
                                const PatchFeatureSet& feats, const GanConfig& cfg) {
  CutLossBreakdown r;
  const Tensor fake_b = g.forward(batch_a);
  const auto adv = adversarial_loss(d_b.forward(batch_b), d_b.forward(fake_b), cfg.adv_mode);
  r.adv_g = adv.loss_g;
  r.adv_d = adv.loss_d;
  r.nce = patchnce_loss(feats);
  r.total_g = r.adv_g + cfg.nce_weight * r.nce;
  r.total_d = r.adv_d;
  return r;
}

}  // namespace roboswap::gan
