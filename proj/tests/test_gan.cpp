#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "roboswap/datagen/dataset.hpp"
#include "roboswap/gan/losses.hpp"
#include "roboswap/gan/train.hpp"
#include "roboswap/gan/translate.hpp"

using namespace roboswap;
using namespace roboswap::gan;
namespace fs = std::filesystem;

namespace {

Tensor random_tensor(std::vector<int> shape, uint64_t seed, float lo = -1.0f, float hi = 1.0f) {
  Rng rng(seed);
  Tensor t(std::move(shape));
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = static_cast<float>(rng.uniform(lo, hi));
  return t;
}

}  // namespace

TEST_CASE("adversarial_loss hand cases") {
  // log mode with probability 0.5 on both sides: logits 0
  Tensor zeros({1, 1, 2, 2});
  const auto log_r = adversarial_loss(zeros, zeros, AdvMode::nonsaturating_log);
  CHECK(log_r.loss_d == doctest::Approx(1.3863).epsilon(1e-4));

  // least squares, perfect discriminator
  Tensor ones({1, 1, 2, 2}, 1.0f);
  const auto ls = adversarial_loss(ones, zeros, AdvMode::least_squares);
  CHECK(ls.loss_d == doctest::Approx(0.0).epsilon(1e-12));
  // perfectly fooled generator
  const auto ls_g = adversarial_loss(ones, ones, AdvMode::least_squares);
  CHECK(ls_g.loss_g == doctest::Approx(0.0).epsilon(1e-12));

  Tensor bad({1, 1, 1, 1});
  bad[0] = std::numeric_limits<float>::infinity();
  CHECK_THROWS_AS(adversarial_loss(bad, zeros, AdvMode::least_squares), NumericError);
}

TEST_CASE("adversarial_loss matches brute-force oracle") {
  const Tensor d_real = random_tensor({2, 1, 3, 3}, 100, -2.0f, 2.0f);
  const Tensor d_fake = random_tensor({2, 1, 3, 3}, 101, -2.0f, 2.0f);

  // least squares
  {
    double ld = 0, lg = 0;
    for (int64_t i = 0; i < d_real.numel(); ++i) ld += (d_real[i] - 1.0) * (d_real[i] - 1.0);
    ld /= d_real.numel();
    double lf = 0;
    for (int64_t i = 0; i < d_fake.numel(); ++i) {
      lf += d_fake[i] * d_fake[i];
      lg += (d_fake[i] - 1.0) * (d_fake[i] - 1.0);
    }
    const auto r = adversarial_loss(d_real, d_fake, AdvMode::least_squares);
    CHECK(r.loss_d == doctest::Approx(ld + lf / d_fake.numel()).epsilon(1e-5));
    CHECK(r.loss_g == doctest::Approx(lg / d_fake.numel()).epsilon(1e-5));
  }
  // log mode
  {
    auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
    double ld = 0, lg = 0;
    for (int64_t i = 0; i < d_real.numel(); ++i) ld -= std::log(sig(d_real[i]));
    ld /= d_real.numel();
    double lf = 0;
    for (int64_t i = 0; i < d_fake.numel(); ++i) {
      lf -= std::log(1.0 - sig(d_fake[i]));
      lg -= std::log(sig(d_fake[i]));
    }
    const auto r = adversarial_loss(d_real, d_fake, AdvMode::nonsaturating_log);
    CHECK(r.loss_d == doctest::Approx(ld + lf / d_fake.numel()).epsilon(1e-5));
    CHECK(r.loss_g == doctest::Approx(lg / d_fake.numel()).epsilon(1e-5));
  }
}

TEST_CASE("generator log-loss is -log p for a constant discriminator") {
  for (double p : {0.3, 0.5, 0.8}) {
    const float logit = static_cast<float>(std::log(p / (1.0 - p)));
    Tensor d_fake({1, 1, 4, 4}, logit);
    const auto r = adversarial_loss(d_fake, d_fake, AdvMode::nonsaturating_log);
    CHECK(r.loss_g == doctest::Approx(-std::log(p)).epsilon(1e-6));
  }
}

TEST_CASE("cycle_loss hand cases and oracle") {
  const Tensor x = random_tensor({1, 3, 4, 4}, 7);
  const Tensor y = random_tensor({1, 3, 4, 4}, 8);
  CHECK(cycle_loss(x, x, y, y) == doctest::Approx(0.0).epsilon(1e-12));

  Tensor zeros({1, 3, 2, 2}, 0.0f), ones({1, 3, 2, 2}, 1.0f);
  CHECK(cycle_loss(zeros, ones, y, y) == doctest::Approx(1.0).epsilon(1e-12));

  const Tensor xc = random_tensor({1, 3, 4, 4}, 9);
  const Tensor yc = random_tensor({1, 3, 4, 4}, 10);
  double oracle = 0;
  for (int64_t i = 0; i < x.numel(); ++i) oracle += std::abs(xc[i] - x[i]);
  oracle /= x.numel();
  double o2 = 0;
  for (int64_t i = 0; i < y.numel(); ++i) o2 += std::abs(yc[i] - y[i]);
  oracle += o2 / y.numel();
  CHECK(cycle_loss(x, xc, y, yc) == doctest::Approx(oracle).epsilon(1e-6));

  Tensor small({1, 3, 2, 2});
  CHECK_THROWS_AS(cycle_loss(x, small, y, yc), InvalidArgument);
}

TEST_CASE("patchnce_loss uniform softmax, monotone temperature, oracle") {
  // all similarities equal with 7 negatives -> ln 8
  {
    PatchFeatureSet f;
    f.queries = Tensor({2, 4}, 0.5f);
    f.positives = Tensor({2, 4}, 0.5f);
    f.negatives = Tensor({2, 7, 4}, 0.5f);
    f.temperature = 0.07f;
    CHECK(patchnce_loss(f) == doctest::Approx(std::log(8.0)).epsilon(1e-4));
  }
  // positive aligned, negatives orthogonal: loss decreases as tau decreases
  {
    double prev = 1e9;
    for (float tau : {1.0f, 0.3f, 0.07f}) {
      PatchFeatureSet f;
      f.queries = Tensor({1, 2});
      f.queries[0] = 1.0f;  // e_x
      f.positives = f.queries;
      f.negatives = Tensor({1, 3, 2});
      for (int k = 0; k < 3; ++k) f.negatives[k * 2 + 1] = 1.0f;  // e_y
      f.temperature = tau;
      const double loss = patchnce_loss(f);
      CHECK(loss < prev);
      prev = loss;
    }
  }
  // random features vs direct log-softmax enumeration
  {
    PatchFeatureSet f;
    f.queries = random_tensor({3, 8}, 50);
    f.positives = random_tensor({3, 8}, 51);
    f.negatives = random_tensor({3, 5, 8}, 52);
    f.temperature = 0.07f;

    auto norm_dot = [&](const float* a, const float* b) {
      double na = 0, nb = 0, d = 0;
      for (int j = 0; j < 8; ++j) {
        na += static_cast<double>(a[j]) * a[j];
        nb += static_cast<double>(b[j]) * b[j];
        d += static_cast<double>(a[j]) * b[j];
      }
      return d / ((std::sqrt(na) + 1e-12) * (std::sqrt(nb) + 1e-12));
    };
    double oracle = 0;
    for (int i = 0; i < 3; ++i) {
      const double sp = norm_dot(f.queries.data() + i * 8, f.positives.data() + i * 8) /
                        f.temperature;
      double z = std::exp(sp);
      for (int k = 0; k < 5; ++k)
        z += std::exp(norm_dot(f.queries.data() + i * 8, f.negatives.data() + (i * 5 + k) * 8) /
                      f.temperature);
      oracle += std::log(z) - sp;
    }
    oracle /= 3;
    CHECK(patchnce_loss(f) == doctest::Approx(oracle).epsilon(1e-5));
  }
  // empty negative set rejected
  {
    PatchFeatureSet f;
    f.queries = Tensor({1, 4});
    f.positives = Tensor({1, 4});
    f.negatives = Tensor({1, 0, 4});
    CHECK_THROWS_AS(patchnce_loss(f), InvalidArgument);
  }
}

TEST_CASE("patchnce_loss gradients match finite differences") {
  PatchFeatureSet f;
  f.queries = random_tensor({2, 6}, 60);
  f.positives = random_tensor({2, 6}, 61);
  f.negatives = random_tensor({2, 4, 6}, 62);
  f.temperature = 0.2f;
  Tensor gq, gp, gn;
  patchnce_loss(f, &gq, &gp, &gn);

  const float h = 1e-3f;
  auto fd_check = [&](Tensor& t, const Tensor& g, int64_t idx) {
    const float orig = t[idx];
    t[idx] = orig + h;
    const double lp = patchnce_loss(f);
    t[idx] = orig - h;
    const double lm = patchnce_loss(f);
    t[idx] = orig;
    const double fd = (lp - lm) / (2.0 * h);
    CHECK(g[idx] == doctest::Approx(fd).epsilon(2e-2));
  };
  fd_check(f.queries, gq, 1);
  fd_check(f.queries, gq, 7);
  fd_check(f.positives, gp, 3);
  fd_check(f.negatives, gn, 5);
}

TEST_CASE("generator contract: shape, range, determinism") {
  Rng rng(1);
  Generator gen(4, 2, "A2B", rng);
  const Tensor x = random_tensor({1, 3, 16, 16}, 70, 0.0f, 1.0f);
  const Tensor y1 = gen.forward(x);
  CHECK(y1.shape() == std::vector<int>{1, 3, 16, 16});
  for (int64_t i = 0; i < y1.numel(); ++i) {
    CHECK(y1[i] >= 0.0f);
    CHECK(y1[i] <= 1.0f);
  }
  const Tensor y2 = gen.forward(x);
  CHECK(y1.raw() == y2.raw());

  const Tensor bad = random_tensor({1, 3, 14, 14}, 71);
  CHECK_THROWS_AS(gen.forward(bad), InvalidArgument);
}

TEST_CASE("generator and discriminator backward match finite differences") {
  Rng rng(3);
  Generator gen(2, 1, "A2B", rng);
  Discriminator disc(4, 2, rng);
  const Tensor x = random_tensor({1, 3, 8, 8}, 80, 0.05f, 0.95f);
  const Tensor target = random_tensor({1, 3, 8, 8}, 81, 0.0f, 1.0f);

  // loss = mse(G(x), target)
  auto loss_fn = [&]() { return nn::mse(gen.forward(x), target); };
  gen.params().zero_grads();
  Generator::Tape tape;
  const Tensor y = gen.forward(x, &tape);
  gen.backward(tape, nn::mse_grad(y, target));

  int checked = 0;
  for (auto* p : gen.params().all()) {
    // probe the largest-gradient element of each parameter tensor
    int64_t best = 0;
    for (int64_t i = 1; i < p->g.numel(); ++i)
      if (std::abs(p->g[i]) > std::abs(p->g[best])) best = i;
    if (std::abs(p->g[best]) < 1e-4f) continue;
    const float h = 1e-2f;
    const float orig = p->v[best];
    p->v[best] = orig + h;
    const double lp = loss_fn();
    p->v[best] = orig - h;
    const double lm = loss_fn();
    p->v[best] = orig;
    const double fd = (lp - lm) / (2.0 * h);
    CHECK(p->g[best] == doctest::Approx(fd).epsilon(5e-2));
    if (++checked >= 6) break;
  }
  CHECK(checked >= 3);

  // discriminator: loss = mean of output map
  auto d_loss = [&]() {
    const Tensor out = disc.forward(x);
    double acc = 0;
    for (int64_t i = 0; i < out.numel(); ++i) acc += out[i];
    return acc / out.numel();
  };
  disc.params().zero_grads();
  Discriminator::Tape dtape;
  const Tensor out = disc.forward(x, &dtape);
  Tensor gout(out.shape(), 1.0f / static_cast<float>(out.numel()));
  disc.backward(dtape, gout);
  checked = 0;
  for (auto* p : disc.params().all()) {
    int64_t best = 0;
    for (int64_t i = 1; i < p->g.numel(); ++i)
      if (std::abs(p->g[i]) > std::abs(p->g[best])) best = i;
    if (std::abs(p->g[best]) < 1e-4f) continue;
    const float h = 1e-2f;
    const float orig = p->v[best];
    p->v[best] = orig + h;
    const double lp = d_loss();
    p->v[best] = orig - h;
    const double lm = d_loss();
    p->v[best] = orig;
    CHECK(p->g[best] == doctest::Approx((lp - lm) / (2.0 * h)).epsilon(5e-2));
    if (++checked >= 4) break;
  }
  CHECK(checked >= 2);
}

TEST_CASE("total_cyclegan_loss weight structure") {
  Rng rng(5);
  Generator g_ab(2, 1, "A2B", rng), g_ba(2, 1, "B2A", rng);
  Discriminator d_a(4, 2, rng), d_b(4, 2, rng);
  const Tensor a = random_tensor({1, 3, 8, 8}, 90, 0.0f, 1.0f);
  const Tensor b = random_tensor({1, 3, 8, 8}, 91, 0.0f, 1.0f);

  GanConfig cfg;
  cfg.cycle_weight = 0.0f;
  const auto r0 = total_cyclegan_loss(a, b, g_ab, g_ba, d_a, d_b, cfg);
  CHECK(r0.total_g == doctest::Approx(r0.adv_ab_g + r0.adv_ba_g).epsilon(1e-9));

  cfg.cycle_weight = 1.0f;
  const auto r1 = total_cyclegan_loss(a, b, g_ab, g_ba, d_a, d_b, cfg);
  cfg.cycle_weight = 10.0f;
  const auto r10 = total_cyclegan_loss(a, b, g_ab, g_ba, d_a, d_b, cfg);
  CHECK(r1.cycle == doctest::Approx(r10.cycle).epsilon(1e-9));  // same raw term
  const double contrib1 = r1.total_g - r1.adv_ab_g - r1.adv_ba_g;
  const double contrib10 = r10.total_g - r10.adv_ab_g - r10.adv_ba_g;
  CHECK(contrib10 == doctest::Approx(10.0 * contrib1).epsilon(1e-6));
}

TEST_CASE("total_cut_loss weight structure") {
  Rng rng(6);
  Generator g(2, 1, "A2B", rng);
  Discriminator d(4, 2, rng);
  const Tensor a = random_tensor({1, 3, 8, 8}, 92, 0.0f, 1.0f);
  const Tensor b = random_tensor({1, 3, 8, 8}, 93, 0.0f, 1.0f);
  PatchFeatureSet feats;
  feats.queries = random_tensor({4, 8}, 94);
  feats.positives = random_tensor({4, 8}, 95);
  feats.negatives = random_tensor({4, 3, 8}, 96);

  GanConfig cfg;
  cfg.nce_weight = 0.0f;
  const auto r0 = total_cut_loss(a, b, g, d, feats, cfg);
  CHECK(r0.total_g == doctest::Approx(r0.adv_g).epsilon(1e-9));
  cfg.nce_weight = 1.0f;
  const auto r1 = total_cut_loss(a, b, g, d, feats, cfg);
  cfg.nce_weight = 2.0f;
  const auto r2 = total_cut_loss(a, b, g, d, feats, cfg);
  CHECK(r2.total_g - r2.adv_g == doctest::Approx(2.0 * (r1.total_g - r1.adv_g)).epsilon(1e-6));
  CHECK(r1.total_g == doctest::Approx(r1.adv_g + r1.nce).epsilon(1e-6));
}

TEST_CASE("translate_video zero input and stubbed identity") {
  ArmVideo arm;
  arm.video = VideoTensor(3, 32, 32);
  CropPolicy policy;
  policy.resolution = 16;

  Rng rng(7);
  Generator gen(2, 1, "A2B", rng);
  const TranslatedArm zero = translate_video(gen, arm, policy);
  for (int64_t i = 0; i < zero.arm.video.data.numel(); ++i)
    CHECK(zero.arm.video.data[i] == 0.0f);

  // identity stub: output equals input within resampling epsilon in the crop
  const datagen::SceneSpec spec = datagen::make_scene_spec(datagen::Domain::A, 31, 64, 64);
  const datagen::Trajectory traj =
      datagen::sample_task_trajectory(spec, 4, datagen::TaskKind::reach, 31);
  const datagen::RenderedClip clip = datagen::render_clip(spec, traj);
  const ArmVideo real_arm = extract_arm(clip.video, clip.masks);
  CropPolicy p64;
  p64.resolution = 64;
  const TranslatedArm ident =
      translate_video_fn([](const Tensor& x) { return x; }, real_arm, p64);
  const int hw = 64 * 64;
  for (int i = 0; i < 4; ++i) {
    const float* a = real_arm.video.frame(i);
    const float* t = ident.arm.video.frame(i);
    const float* m = clip.masks.frame(i);
    for (int p = 0; p < hw; ++p) {
      if (m[p] == 0.0f) continue;
      // interior arm pixels survive the resample round trip
      for (int c = 0; c < 3; ++c)
        if (t[c * hw + p] != 0.0f)
          CHECK(std::abs(t[c * hw + p] - a[c * hw + p]) <= 0.15f);
    }
  }
}

TEST_CASE("train_gan smoke run, determinism and resume") {
  const std::string root = (fs::temp_directory_path() / "rs_test_gan").string();
  fs::remove_all(root);
  datagen::build_dataset(datagen::Domain::A, 2, 6, 64, 64, 21, root);
  datagen::build_dataset(datagen::Domain::B, 2, 6, 64, 64, 22, root);
  prepare_crops(root, "A", 6, 32, CropScope::arm_crop, root + "/crops/A");
  prepare_crops(root, "B", 6, 32, CropScope::arm_crop, root + "/crops/B");

  GanConfig cfg;
  cfg.base_width = 2;
  cfg.n_residual_blocks = 1;
  cfg.d_base_width = 4;
  cfg.d_layers = 2;
  cfg.crop_resolution = 32;
  cfg.epochs = 4;
  cfg.checkpoint_every = 2;
  cfg.image_buffer_size = 4;
  cfg.seed = 33;

  const auto r1 = train_gan(root + "/crops/A", root + "/crops/B", cfg, GanVariant::cyclegan,
                            root + "/gan1");
  CHECK(fs::exists(r1.final_checkpoint));
  CHECK(fs::exists(root + "/gan1/loss_log.csv"));
  CHECK(r1.epoch_total_g.size() == 4);

  // bit-identical rerun
  const auto r2 = train_gan(root + "/crops/A", root + "/crops/B", cfg, GanVariant::cyclegan,
                            root + "/gan2");
  const auto ck1 = nn::Checkpoint::load(r1.final_checkpoint);
  const auto ck2 = nn::Checkpoint::load(r2.final_checkpoint);
  REQUIRE(ck1.tensors.size() == ck2.tensors.size());
  for (size_t i = 0; i < ck1.tensors.size(); ++i)
    CHECK(ck1.tensors[i].second.raw() == ck2.tensors[i].second.raw());

  // resume from the epoch-2 checkpoint reproduces the uninterrupted run
  const auto r3 = train_gan(root + "/crops/A", root + "/crops/B", cfg, GanVariant::cyclegan,
                            root + "/gan3", root + "/gan1/ckpt_epoch_0002.bin");
  const auto ck3 = nn::Checkpoint::load(r3.final_checkpoint);
  for (size_t i = 0; i < ck1.tensors.size(); ++i)
    CHECK(ck1.tensors[i].second.raw() == ck3.tensors[i].second.raw());

  // loaded generator runs
  const LoadedGan loaded = load_gan(r1.final_checkpoint);
  const Tensor x = random_tensor({1, 3, 32, 32}, 99, 0.0f, 1.0f);
  CHECK(loaded.g_ab->forward(x).shape() == std::vector<int>{1, 3, 32, 32});

  // cut variant smoke
  cfg.epochs = 2;
  cfg.nce_patches = 16;
  const auto rc = train_gan(root + "/crops/A", root + "/crops/B", cfg, GanVariant::cut,
                            root + "/gan_cut");
  CHECK(fs::exists(rc.final_checkpoint));

  fs::remove_all(root);
}
