#include "roboswap/gan/train.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "roboswap/compositing/warp.hpp"
#include "roboswap/core/hash.hpp"
#include "roboswap/core/image.hpp"
#include "roboswap/core/rng.hpp"
#include "roboswap/datagen/dataset.hpp"
#include "roboswap/nn/adam.hpp"

namespace fs = std::filesystem;

namespace roboswap::gan {

namespace {

Tensor image_to_tensor(const ImageU8& img) {
  Tensor t({3, img.h, img.w});
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.h; ++y)
      for (int x = 0; x < img.w; ++x) t.at3(c, y, x) = img.at(y, x, c) / 255.0f;
  return t;
}

ImageU8 tensor_to_image(const Tensor& t) {
  ImageU8 img;
  img.h = t.dim(1);
  img.w = t.dim(2);
  img.channels = 3;
  img.data.resize(static_cast<size_t>(img.h) * img.w * 3);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.h; ++y)
      for (int x = 0; x < img.w; ++x) {
        float v = t.at3(c, y, x);
        v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
        img.at(y, x, c) = static_cast<uint8_t>(std::lround(v * 255.0f));
      }
  return img;
}

Tensor as_batch(const Tensor& img) {
  Tensor b({1, img.dim(0), img.dim(1), img.dim(2)});
  std::copy(img.data(), img.data() + img.numel(), b.data());
  return b;
}

// CycleGAN-style replay buffer: returns the current image until full, then
// with probability 1/2 swaps in a stored one.
class ImagePool {
 public:
  explicit ImagePool(int capacity) : capacity_(capacity) {}

  Tensor query(const Tensor& image, Rng& rng) {
    if (capacity_ <= 0) return image;
    if (static_cast<int>(pool_.size()) < capacity_) {
      pool_.push_back(image);
      return image;
    }
    if (rng.uniform() < 0.5) {
      const auto idx = static_cast<size_t>(rng.uniform_int(0, capacity_ - 1));
      Tensor out = pool_[idx];
      pool_[idx] = image;
      return out;
    }
    return image;
  }

  std::vector<Tensor>& images() { return pool_; }
  const std::vector<Tensor>& images() const { return pool_; }

 private:
  int capacity_;
  std::vector<Tensor> pool_;
};

struct Nets {
  std::unique_ptr<Generator> g_ab, g_ba;
  std::unique_ptr<Discriminator> d_a, d_b;
};

Nets build_nets(const GanConfig& cfg, GanVariant variant) {
  Nets n;
  Rng rng(derive_seed(cfg.seed, 0x6A11, 1));
  n.g_ab = std::make_unique<Generator>(cfg.base_width, cfg.n_residual_blocks, "A2B", rng);
  if (variant == GanVariant::cyclegan)
    n.g_ba = std::make_unique<Generator>(cfg.base_width, cfg.n_residual_blocks, "B2A", rng);
  n.d_b = std::make_unique<Discriminator>(cfg.d_base_width, cfg.d_layers, rng);
  if (variant == GanVariant::cyclegan)
    n.d_a = std::make_unique<Discriminator>(cfg.d_base_width, cfg.d_layers, rng);
  return n;
}

void add_params(nn::Checkpoint& ck, const std::string& prefix, nn::ParamStore& store) {
  for (auto* p : store.all()) ck.add(prefix + p->name, p->v);
}

void load_params(const nn::Checkpoint& ck, const std::string& prefix, nn::ParamStore& store) {
  for (auto* p : store.all()) p->v = ck.tensor(prefix + p->name);
}

void add_adam(nn::Checkpoint& ck, const std::string& prefix, nn::Adam& opt) {
  for (size_t i = 0; i < opt.moment1().size(); ++i) {
    ck.add(prefix + "m" + std::to_string(i), opt.moment1()[i]);
    ck.add(prefix + "v" + std::to_string(i), opt.moment2()[i]);
  }
}

void load_adam(const nn::Checkpoint& ck, const std::string& prefix, nn::Adam& opt) {
  for (size_t i = 0; i < opt.moment1().size(); ++i) {
    opt.moment1()[i] = ck.tensor(prefix + "m" + std::to_string(i));
    opt.moment2()[i] = ck.tensor(prefix + "v" + std::to_string(i));
  }
}

void add_pool(nn::Checkpoint& ck, const std::string& prefix, const ImagePool& pool) {
  const auto& imgs = pool.images();
  for (size_t i = 0; i < imgs.size(); ++i) ck.add(prefix + std::to_string(i), imgs[i]);
}

void load_pool(const nn::Checkpoint& ck, const std::string& prefix, ImagePool& pool, int count) {
  pool.images().clear();
  for (int i = 0; i < count; ++i) pool.images().push_back(ck.tensor(prefix + std::to_string(i)));
}

std::vector<int> shuffled_indices(int n, Rng& rng) {
  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<size_t>(rng.uniform_int(0, i));
    std::swap(idx[static_cast<size_t>(i)], idx[j]);
  }
  return idx;
}

double lr_scale_for_epoch(int epoch, int total) {
  const int half = total / 2;
  if (epoch < half) return 1.0;
  return static_cast<double>(total - epoch) / static_cast<double>(total - half);
}

// Sample distinct spatial locations and gather channel vectors.
void gather_patch_features(const std::vector<Tensor>& feats, const std::vector<Tensor>& ref_feats,
                           int n_patches, float tau, Rng& rng,
                           std::vector<PatchFeatureSet>* sets,
                           std::vector<std::vector<int>>* locations) {
  sets->clear();
  locations->clear();
  for (size_t li = 0; li < feats.size(); ++li) {
    const Tensor& fy = feats[li];      // query source (translated image)
    const Tensor& fx = ref_feats[li];  // positives/negatives (input image)
    const int c = fy.dim(1), h = fy.dim(2), w = fy.dim(3);
    const int hw = h * w;
    const int m = std::min(n_patches, hw);
    std::vector<int> locs(static_cast<size_t>(hw));
    for (int i = 0; i < hw; ++i) locs[static_cast<size_t>(i)] = i;
    for (int i = 0; i < m; ++i) {
      const auto j = static_cast<size_t>(rng.uniform_int(i, hw - 1));
      std::swap(locs[static_cast<size_t>(i)], locs[j]);
    }
    locs.resize(static_cast<size_t>(m));

    PatchFeatureSet set;
    set.temperature = tau;
    set.queries = Tensor({m, c});
    set.positives = Tensor({m, c});
    set.negatives = Tensor({m, m - 1, c});
    for (int i = 0; i < m; ++i) {
      const int p = locs[static_cast<size_t>(i)];
      for (int ch = 0; ch < c; ++ch) {
        set.queries.at2(i, ch) = fy[static_cast<int64_t>(ch) * hw + p];
        set.positives.at2(i, ch) = fx[static_cast<int64_t>(ch) * hw + p];
      }
      int kk = 0;
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;  // positive never among negatives
        const int pj = locs[static_cast<size_t>(j)];
        for (int ch = 0; ch < c; ++ch)
          set.negatives[(static_cast<int64_t>(i) * (m - 1) + kk) * c + ch] =
              fx[static_cast<int64_t>(ch) * hw + pj];
        ++kk;
      }
    }
    sets->push_back(std::move(set));
    locations->push_back(std::move(locs));
  }
}

}  // namespace

void prepare_crops(const std::string& dataset_root, const std::string& domain, int count,
                   int resolution, CropScope scope, const std::string& out_dir) {
  const auto clip_dirs = datagen::list_clip_dirs((fs::path(dataset_root) / domain).string());
  if (clip_dirs.empty()) throw MissingData("prepare_crops: no clips under " + dataset_root);
  fs::create_directories(out_dir);

  int written = 0;
  // round-robin over clips, stepping through frames, until count crops
  int pass = 0;
  while (written < count) {
    bool wrote_any = false;
    for (size_t ci = 0; ci < clip_dirs.size() && written < count; ++ci) {
      const datagen::RenderedClip clip = datagen::load_clip(clip_dirs[ci]);
      const int n = clip.video.frames();
      const int frame = (pass * 5) % n;  // stride through frames across passes
      Tensor img({3, clip.video.height(), clip.video.width()});

      if (scope == CropScope::full_frame) {
        std::copy(clip.video.frame(frame), clip.video.frame(frame) + img.numel(), img.data());
      } else {
        const ArmVideo arm = extract_arm(clip.video, clip.masks);
        const PixelBox box = nonzero_box(clip.masks.frame(frame), clip.masks.height(),
                                         clip.masks.width());
        if (box.empty()) continue;
        const PixelBox d = box.dilated(2, clip.masks.height(), clip.masks.width());
        Tensor crop({3, d.height(), d.width()});
        const int hw = clip.video.height() * clip.video.width();
        for (int c = 0; c < 3; ++c)
          for (int y = 0; y < d.height(); ++y)
            for (int x = 0; x < d.width(); ++x)
              crop.at3(c, y, x) = arm.video.frame(frame)[c * hw + (d.y0 + y) * clip.video.width() +
                                                         (d.x0 + x)];
        img = crop;
      }
      const Tensor resized = resize_bilinear(img, resolution, resolution);
      char name[32];
      std::snprintf(name, sizeof(name), "crop_%05d.png", written);
      write_png((fs::path(out_dir) / name).string(), tensor_to_image(resized));
      ++written;
      wrote_any = true;
    }
    ++pass;
    if (!wrote_any && written == 0) throw MissingData("prepare_crops: no usable frames");
  }
}

std::vector<Tensor> load_crop_dir(const std::string& dir) {
  std::vector<std::string> files;
  if (!fs::exists(dir)) throw MissingData("load_crop_dir: no directory " + dir);
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".png") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw MissingData("load_crop_dir: empty dataset " + dir);
  std::vector<Tensor> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(image_to_tensor(read_png(f)));
  return out;
}

std::string gan_arch_hash(const GanConfig& cfg, GanVariant variant) {
  const std::string desc = "gan/v1 variant=" + to_string(variant) +
                           " base=" + std::to_string(cfg.base_width) +
                           " blocks=" + std::to_string(cfg.n_residual_blocks) +
                           " dbase=" + std::to_string(cfg.d_base_width) +
                           " dlayers=" + std::to_string(cfg.d_layers) +
                           " res=" + std::to_string(cfg.crop_resolution);
  return hash_hex(fnv1a(desc));
}

TrainResult train_gan(const std::string& dataset_a_dir, const std::string& dataset_b_dir,
                      const GanConfig& cfg, GanVariant variant, const std::string& out_dir,
                      const std::string& resume_ckpt) {
  cfg.validate();
  const auto crops_a = load_crop_dir(dataset_a_dir);
  const auto crops_b = load_crop_dir(dataset_b_dir);
  fs::create_directories(out_dir);

  Nets nets = build_nets(cfg, variant);
  nn::ParamRefs g_params = nets.g_ab->params().all();
  if (nets.g_ba)
    for (auto* p : nets.g_ba->params().all()) g_params.push_back(p);
  nn::ParamRefs d_params = nets.d_b->params().all();
  if (nets.d_a)
    for (auto* p : nets.d_a->params().all()) d_params.push_back(p);

  nn::Adam opt_g(g_params, cfg.lr, cfg.beta1, cfg.beta2);
  nn::Adam opt_d(d_params, cfg.lr, cfg.beta1, cfg.beta2);
  ImagePool pool_b(cfg.image_buffer_size);
  ImagePool pool_a(cfg.image_buffer_size);

  const std::string arch = gan_arch_hash(cfg, variant);
  int start_epoch = 0;
  if (!resume_ckpt.empty()) {
    const nn::Checkpoint ck = nn::Checkpoint::load(resume_ckpt);
    if (ck.kind != "gan") throw InvalidArgument("train_gan: checkpoint kind mismatch");
    if (ck.arch_hash != arch)
      throw InvalidArgument("train_gan: architecture hash mismatch on resume");
    if (ck.config.at("gan").dump() != cfg.to_json().dump())
      throw InvalidArgument("train_gan: config mismatch on resume");
    load_params(ck, "gab/", nets.g_ab->params());
    if (nets.g_ba) load_params(ck, "gba/", nets.g_ba->params());
    load_params(ck, "db/", nets.d_b->params());
    if (nets.d_a) load_params(ck, "da/", nets.d_a->params());
    load_adam(ck, "adam_g/", opt_g);
    load_adam(ck, "adam_d/", opt_d);
    opt_g.set_step_count(ck.extra.at("adam_g_steps").get<int64_t>());
    opt_d.set_step_count(ck.extra.at("adam_d_steps").get<int64_t>());
    load_pool(ck, "pool_b/", pool_b, ck.extra.at("pool_b_count").get<int>());
    if (nets.d_a) load_pool(ck, "pool_a/", pool_a, ck.extra.at("pool_a_count").get<int>());
    start_epoch = static_cast<int>(ck.step);
  }

  const std::string log_path = (fs::path(out_dir) / "loss_log.csv").string();
  std::ofstream log(log_path, start_epoch == 0 ? std::ios::trunc : std::ios::app);
  if (start_epoch == 0)
    log << "epoch,adv_g,cycle_or_nce,identity,total_g,total_d,lr_scale\n";

  auto save_checkpoint = [&](int epoch, const std::string& name) {
    nn::Checkpoint ck;
    ck.kind = "gan";
    ck.arch_hash = arch;
    ck.config["gan"] = cfg.to_json();
    ck.config["variant"] = to_string(variant);
    ck.step = epoch;
    ck.extra["adam_g_steps"] = opt_g.step_count();
    ck.extra["adam_d_steps"] = opt_d.step_count();
    ck.extra["pool_b_count"] = static_cast<int>(pool_b.images().size());
    ck.extra["pool_a_count"] = static_cast<int>(pool_a.images().size());
    ck.extra["rng"] = "epoch-derived";
    add_params(ck, "gab/", nets.g_ab->params());
    if (nets.g_ba) add_params(ck, "gba/", nets.g_ba->params());
    add_params(ck, "db/", nets.d_b->params());
    if (nets.d_a) add_params(ck, "da/", nets.d_a->params());
    add_adam(ck, "adam_g/", opt_g);
    add_adam(ck, "adam_d/", opt_d);
    add_pool(ck, "pool_b/", pool_b);
    if (nets.d_a) add_pool(ck, "pool_a/", pool_a);
    ck.save((fs::path(out_dir) / name).string());
  };

  TrainResult result;
  const int steps_per_epoch = static_cast<int>(std::min(crops_a.size(), crops_b.size()));

  for (int epoch = start_epoch; epoch < cfg.epochs; ++epoch) {
    const double scale = lr_scale_for_epoch(epoch, cfg.epochs);
    opt_g.set_lr_scale(scale);
    opt_d.set_lr_scale(scale);

    Rng epoch_rng(derive_seed(cfg.seed, static_cast<uint64_t>(epoch), 0xE60C));
    const auto order_a = shuffled_indices(static_cast<int>(crops_a.size()), epoch_rng);
    const auto order_b = shuffled_indices(static_cast<int>(crops_b.size()), epoch_rng);

    double sum_adv_g = 0, sum_cyc = 0, sum_idt = 0, sum_g = 0, sum_d = 0;

    for (int step = 0; step < steps_per_epoch; ++step) {
      const Tensor a = as_batch(crops_a[static_cast<size_t>(order_a[static_cast<size_t>(step)])]);
      const Tensor b = as_batch(crops_b[static_cast<size_t>(order_b[static_cast<size_t>(step)])]);

      double step_adv_g = 0, step_cyc = 0, step_idt = 0, step_d = 0;

      if (variant == GanVariant::cyclegan) {
        // --- generator update ---
        for (auto* p : g_params) p->zero_grad();
        Generator::Tape t_ab, t_rec_a, t_ba, t_rec_b;
        const Tensor fake_b = nets.g_ab->forward(a, &t_ab);
        const Tensor rec_a = nets.g_ba->forward(fake_b, &t_rec_a);
        const Tensor fake_a = nets.g_ba->forward(b, &t_ba);
        const Tensor rec_b = nets.g_ab->forward(fake_a, &t_rec_b);

        Discriminator::Tape t_db, t_da;
        const Tensor db_fake = nets.d_b->forward(fake_b, &t_db);
        const Tensor da_fake = nets.d_a->forward(fake_a, &t_da);

        Tensor g_db_fake, g_da_fake;
        const auto adv_b = adversarial_loss(db_fake, db_fake, cfg.adv_mode, nullptr, nullptr,
                                            &g_db_fake);
        const auto adv_a = adversarial_loss(da_fake, da_fake, cfg.adv_mode, nullptr, nullptr,
                                            &g_da_fake);
        Tensor g_rec_a, g_rec_b;
        const double cyc = cycle_loss(a, rec_a, b, rec_b, &g_rec_a, &g_rec_b);
        nn::scale_inplace(g_rec_a, cfg.cycle_weight);
        nn::scale_inplace(g_rec_b, cfg.cycle_weight);

        double idt = 0.0;
        if (cfg.identity_loss_weight > 0.0f) {
          Generator::Tape t_idt_b, t_idt_a;
          const Tensor idt_b = nets.g_ab->forward(b, &t_idt_b);
          const Tensor idt_a = nets.g_ba->forward(a, &t_idt_a);
          idt = nn::mean_abs(idt_b, b) + nn::mean_abs(idt_a, a);
          Tensor g_idt_b = nn::mean_abs_grad(idt_b, b);
          Tensor g_idt_a = nn::mean_abs_grad(idt_a, a);
          nn::scale_inplace(g_idt_b, cfg.identity_loss_weight);
          nn::scale_inplace(g_idt_a, cfg.identity_loss_weight);
          nets.g_ab->backward(t_idt_b, g_idt_b);
          nets.g_ba->backward(t_idt_a, g_idt_a);
        }

        // adversarial gradient flows through the frozen discriminators
        Tensor g_fake_b = nets.d_b->backward(t_db, g_db_fake);
        Tensor g_fake_a = nets.d_a->backward(t_da, g_da_fake);
        // cycle gradient through the second generator
        nn::add_inplace(g_fake_b, nets.g_ba->backward(t_rec_a, g_rec_a));
        nn::add_inplace(g_fake_a, nets.g_ab->backward(t_rec_b, g_rec_b));
        nets.g_ab->backward(t_ab, g_fake_b);
        nets.g_ba->backward(t_ba, g_fake_a);
        opt_g.step();

        // --- discriminator update (replay buffer) ---
        for (auto* p : d_params) p->zero_grad();
        Rng pool_rng(derive_seed(cfg.seed, static_cast<uint64_t>(epoch) * 1000003 + step, 0xB0F));
        const Tensor fake_b_pool = pool_b.query(fake_b, pool_rng);
        const Tensor fake_a_pool = pool_a.query(fake_a, pool_rng);

        Discriminator::Tape t_db_real, t_db_fake, t_da_real, t_da_fake;
        const Tensor db_real = nets.d_b->forward(b, &t_db_real);
        const Tensor db_fake2 = nets.d_b->forward(fake_b_pool, &t_db_fake);
        const Tensor da_real = nets.d_a->forward(a, &t_da_real);
        const Tensor da_fake2 = nets.d_a->forward(fake_a_pool, &t_da_fake);

        Tensor g_real_b, g_fake_b_d, g_real_a, g_fake_a_d;
        const auto adv_db =
            adversarial_loss(db_real, db_fake2, cfg.adv_mode, &g_real_b, &g_fake_b_d, nullptr);
        const auto adv_da =
            adversarial_loss(da_real, da_fake2, cfg.adv_mode, &g_real_a, &g_fake_a_d, nullptr);
        nets.d_b->backward(t_db_real, g_real_b);
        nets.d_b->backward(t_db_fake, g_fake_b_d);
        nets.d_a->backward(t_da_real, g_real_a);
        nets.d_a->backward(t_da_fake, g_fake_a_d);
        opt_d.step();

        step_adv_g = adv_b.loss_g + adv_a.loss_g;
        step_cyc = cyc;
        step_idt = idt;
        step_d = adv_db.loss_d + adv_da.loss_d;
      } else {
        // --- CUT: single generator, adversarial + contrastive ---
        for (auto* p : g_params) p->zero_grad();
        Generator::Tape t_g;
        const Tensor fake_b = nets.g_ab->forward(a, &t_g);

        Discriminator::Tape t_db;
        const Tensor db_fake = nets.d_b->forward(fake_b, &t_db);
        Tensor g_db_fake;
        const auto adv = adversarial_loss(db_fake, db_fake, cfg.adv_mode, nullptr, nullptr,
                                          &g_db_fake);
        Tensor g_fake_b = nets.d_b->backward(t_db, g_db_fake);

        Generator::EncoderTape enc_x, enc_y;
        const auto feats_x = nets.g_ab->encoder_features(a, &enc_x);
        const auto feats_y = nets.g_ab->encoder_features(fake_b, &enc_y);

        Rng patch_rng(derive_seed(cfg.seed, static_cast<uint64_t>(epoch) * 1000003 + step, 0xACE));
        std::vector<PatchFeatureSet> sets;
        std::vector<std::vector<int>> locations;
        gather_patch_features(feats_y, feats_x, cfg.nce_patches, cfg.nce_temperature, patch_rng,
                              &sets, &locations);

        double nce = 0.0;
        std::vector<Tensor> gfeat_y, gfeat_x;
        for (size_t li = 0; li < sets.size(); ++li) {
          Tensor gq, gpos, gneg;
          nce += patchnce_loss(sets[li], &gq, &gpos, &gneg);
          // scatter grads back into feature maps
          const Tensor& fy = feats_y[li];
          const int c = fy.dim(1), hw = fy.dim(2) * fy.dim(3);
          Tensor gy(fy.shape()), gx(fy.shape());
          const auto& locs = locations[li];
          const int m = static_cast<int>(locs.size());
          for (int i = 0; i < m; ++i) {
            const int p = locs[static_cast<size_t>(i)];
            for (int ch = 0; ch < c; ++ch) {
              gy[static_cast<int64_t>(ch) * hw + p] += gq.at2(i, ch) * cfg.nce_weight;
              gx[static_cast<int64_t>(ch) * hw + p] += gpos.at2(i, ch) * cfg.nce_weight;
            }
            int kk = 0;
            for (int j = 0; j < m; ++j) {
              if (j == i) continue;
              const int pj = locs[static_cast<size_t>(j)];
              for (int ch = 0; ch < c; ++ch)
                gx[static_cast<int64_t>(ch) * hw + pj] +=
                    gneg[(static_cast<int64_t>(i) * (m - 1) + kk) * c + ch] * cfg.nce_weight;
              ++kk;
            }
          }
          gfeat_y.push_back(std::move(gy));
          gfeat_x.push_back(std::move(gx));
        }
        nce /= static_cast<double>(sets.size());

        nn::add_inplace(g_fake_b, nets.g_ab->encoder_backward(enc_y, gfeat_y));
        nets.g_ab->encoder_backward(enc_x, gfeat_x);
        nets.g_ab->backward(t_g, g_fake_b);
        opt_g.step();

        // --- discriminator update ---
        for (auto* p : d_params) p->zero_grad();
        Rng pool_rng(derive_seed(cfg.seed, static_cast<uint64_t>(epoch) * 1000003 + step, 0xB0F));
        const Tensor fake_b_pool = pool_b.query(fake_b, pool_rng);
        Discriminator::Tape t_real, t_fake;
        const Tensor db_real = nets.d_b->forward(b, &t_real);
        const Tensor db_fake2 = nets.d_b->forward(fake_b_pool, &t_fake);
        Tensor g_real, g_fake_d;
        const auto adv_d =
            adversarial_loss(db_real, db_fake2, cfg.adv_mode, &g_real, &g_fake_d, nullptr);
        nets.d_b->backward(t_real, g_real);
        nets.d_b->backward(t_fake, g_fake_d);
        opt_d.step();

        step_adv_g = adv.loss_g;
        step_cyc = nce;
        step_d = adv_d.loss_d;
      }

      if (!std::isfinite(step_adv_g) || !std::isfinite(step_cyc) || !std::isfinite(step_d))
        throw NumericError("train_gan: training diverged (non-finite loss) at epoch " +
                           std::to_string(epoch));

      sum_adv_g += step_adv_g;
      sum_cyc += step_cyc;
      sum_idt += step_idt;
      sum_d += step_d;
      sum_g += step_adv_g + (variant == GanVariant::cyclegan
                                 ? cfg.cycle_weight * step_cyc + cfg.identity_loss_weight * step_idt
                                 : cfg.nce_weight * step_cyc);
    }

    const double inv = 1.0 / steps_per_epoch;
    log << epoch << "," << sum_adv_g * inv << "," << sum_cyc * inv << "," << sum_idt * inv << ","
        << sum_g * inv << "," << sum_d * inv << "," << scale << "\n";
    log.flush();
    result.epoch_adv_g.push_back(sum_adv_g * inv);
    result.epoch_cycle_or_nce.push_back(sum_cyc * inv);
    result.epoch_total_g.push_back(sum_g * inv);
    result.epoch_total_d.push_back(sum_d * inv);

    if ((epoch + 1) % cfg.checkpoint_every == 0 && epoch + 1 < cfg.epochs) {
      char name[48];
      std::snprintf(name, sizeof(name), "ckpt_epoch_%04d.bin", epoch + 1);
      save_checkpoint(epoch + 1, name);
    }
  }

  save_checkpoint(cfg.epochs, "final.bin");
  result.final_checkpoint = (fs::path(out_dir) / "final.bin").string();
  return result;
}

LoadedGan load_gan(const std::string& ckpt_path) {
  const nn::Checkpoint ck = nn::Checkpoint::load(ckpt_path);
  if (ck.kind != "gan") throw InvalidArgument("load_gan: not a gan checkpoint");
  LoadedGan out;
  out.cfg = GanConfig::from_json(ck.config.at("gan"));
  out.variant = variant_from_string(ck.config.at("variant").get<std::string>());
  if (ck.arch_hash != gan_arch_hash(out.cfg, out.variant))
    throw InvalidArgument("load_gan: architecture hash mismatch");
  Rng rng(derive_seed(out.cfg.seed, 0x6A11, 1));
  out.g_ab = std::make_unique<Generator>(out.cfg.base_width, out.cfg.n_residual_blocks, "A2B", rng);
  if (out.variant == GanVariant::cyclegan)
    out.g_ba =
        std::make_unique<Generator>(out.cfg.base_width, out.cfg.n_residual_blocks, "B2A", rng);
  load_params(ck, "gab/", out.g_ab->params());
  if (out.g_ba) load_params(ck, "gba/", out.g_ba->params());
  return out;
}

}  // namespace roboswap::gan
