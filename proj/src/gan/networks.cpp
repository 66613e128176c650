#include "roboswap/gan/networks.hpp"

namespace roboswap::gan {

namespace {

nn::Unit make_unit(ParamStore& store, const std::string& name, int cin, int cout, int k,
                   int stride, int pad, bool norm, nn::Act act, Rng& rng) {
  nn::Unit u;
  u.w = &store.add(name + ".w", {cout, cin, k, k});
  u.b = &store.add(name + ".b", {cout});
  nn::init_conv(*u.w, u.b, rng);
  if (norm) {
    u.gamma = &store.add(name + ".gamma", {cout});
    u.beta = &store.add(name + ".beta", {cout});
    nn::init_const(*u.gamma, 1.0f);
  }
  u.stride = stride;
  u.pad = pad;
  u.act = act;
  return u;
}

}  // namespace

Generator::Generator(int base_width, int n_residual_blocks, const std::string& direction,
                     Rng& rng)
    : base_(base_width), blocks_(n_residual_blocks), direction_(direction) {
  const int b = base_width;
  stem_ = make_unit(store_, "stem", 3, b, 7, 1, 3, true, nn::Act::relu, rng);
  down1_ = make_unit(store_, "down1", b, 2 * b, 3, 2, 1, true, nn::Act::relu, rng);
  down2_ = make_unit(store_, "down2", 2 * b, 4 * b, 3, 2, 1, true, nn::Act::relu, rng);
  for (int i = 0; i < n_residual_blocks; ++i) {
    res_.push_back(make_unit(store_, "res" + std::to_string(i) + ".0", 4 * b, 4 * b, 3, 1, 1, true,
                             nn::Act::relu, rng));
    res_.push_back(make_unit(store_, "res" + std::to_string(i) + ".1", 4 * b, 4 * b, 3, 1, 1, true,
                             nn::Act::none, rng));
  }
  up1_ = make_unit(store_, "up1", 4 * b, 2 * b, 3, 1, 1, true, nn::Act::relu, rng);
  up2_ = make_unit(store_, "up2", 2 * b, b, 3, 1, 1, true, nn::Act::relu, rng);
  head_ = make_unit(store_, "head", b, 3, 7, 1, 3, false, nn::Act::sigmoid, rng);
}

std::string Generator::arch_desc() const {
  return "generator/v1 base=" + std::to_string(base_) + " blocks=" + std::to_string(blocks_) +
         " dir=" + direction_;
}

Tensor Generator::forward(const Tensor& x, Tape* tape) const {
  if (x.dim(2) % 4 != 0 || x.dim(3) % 4 != 0)
    throw InvalidArgument("generator: spatial dims must be divisible by 4");
  if (tape) {
    tape->res.resize(static_cast<size_t>(2 * blocks_));
    tape->res_in.resize(static_cast<size_t>(blocks_));
  }
  Tensor h = nn::unit_forward(stem_, x, tape ? &tape->stem : nullptr);
  h = nn::unit_forward(down1_, h, tape ? &tape->down1 : nullptr);
  h = nn::unit_forward(down2_, h, tape ? &tape->down2 : nullptr);
  for (int i = 0; i < blocks_; ++i) {
    if (tape) tape->res_in[static_cast<size_t>(i)] = h;
    Tensor t = nn::unit_forward(res_[static_cast<size_t>(2 * i)], h,
                                tape ? &tape->res[static_cast<size_t>(2 * i)] : nullptr);
    t = nn::unit_forward(res_[static_cast<size_t>(2 * i + 1)], t,
                         tape ? &tape->res[static_cast<size_t>(2 * i + 1)] : nullptr);
    h = nn::add(h, t);
  }
  if (tape) tape->up1_in = h;
  h = nn::upsample2x_nearest(h);
  h = nn::unit_forward(up1_, h, tape ? &tape->up1c : nullptr);
  if (tape) tape->up2_in = h;
  h = nn::upsample2x_nearest(h);
  h = nn::unit_forward(up2_, h, tape ? &tape->up2c : nullptr);
  return nn::unit_forward(head_, h, tape ? &tape->head : nullptr);
}

Tensor Generator::backward(Tape& tape, const Tensor& gy) {
  Tensor g = nn::unit_backward(head_, tape.head, gy);
  g = nn::unit_backward(up2_, tape.up2c, g);
  {
    Tensor gu;
    nn::upsample2x_nearest_backward(g, &gu);
    g = std::move(gu);
  }
  g = nn::unit_backward(up1_, tape.up1c, g);
  {
    Tensor gu;
    nn::upsample2x_nearest_backward(g, &gu);
    g = std::move(gu);
  }
  for (int i = blocks_ - 1; i >= 0; --i) {
    Tensor gt = nn::unit_backward(res_[static_cast<size_t>(2 * i + 1)],
                                  tape.res[static_cast<size_t>(2 * i + 1)], g);
    gt = nn::unit_backward(res_[static_cast<size_t>(2 * i)],
                           tape.res[static_cast<size_t>(2 * i)], gt);
    nn::add_inplace(g, gt);  // skip connection
  }
  g = nn::unit_backward(down2_, tape.down2, g);
  g = nn::unit_backward(down1_, tape.down1, g);
  return nn::unit_backward(stem_, tape.stem, g);
}

std::vector<Tensor> Generator::encoder_features(const Tensor& x, EncoderTape* tape) const {
  if (tape) {
    tape->res.resize(static_cast<size_t>(2 * blocks_));
    tape->res_in.resize(static_cast<size_t>(blocks_));
    tape->n_blocks_used = blocks_;
  }
  std::vector<Tensor> feats;
  Tensor h = nn::unit_forward(stem_, x, tape ? &tape->stem : nullptr);
  h = nn::unit_forward(down1_, h, tape ? &tape->down1 : nullptr);
  feats.push_back(h);
  h = nn::unit_forward(down2_, h, tape ? &tape->down2 : nullptr);
  feats.push_back(h);
  for (int i = 0; i < blocks_; ++i) {
    if (tape) tape->res_in[static_cast<size_t>(i)] = h;
    Tensor t = nn::unit_forward(res_[static_cast<size_t>(2 * i)], h,
                                tape ? &tape->res[static_cast<size_t>(2 * i)] : nullptr);
    t = nn::unit_forward(res_[static_cast<size_t>(2 * i + 1)], t,
                         tape ? &tape->res[static_cast<size_t>(2 * i + 1)] : nullptr);
    h = nn::add(h, t);
    if (i % 2 == 1) feats.push_back(h);  // every second residual block
  }
  return feats;
}

Tensor Generator::encoder_backward(EncoderTape& tape, const std::vector<Tensor>& feature_grads) {
  // feature order: down1, down2, res1, res3, ...
  size_t fi = feature_grads.size();
  Tensor g;  // grad flowing backward through the trunk
  bool has_g = false;
  for (int i = tape.n_blocks_used - 1; i >= 0; --i) {
    if (i % 2 == 1) {
      --fi;
      if (has_g)
        nn::add_inplace(g, feature_grads[fi]);
      else {
        g = feature_grads[fi];
        has_g = true;
      }
    }
    if (!has_g) continue;
    Tensor gt = nn::unit_backward(res_[static_cast<size_t>(2 * i + 1)],
                                  tape.res[static_cast<size_t>(2 * i + 1)], g);
    gt = nn::unit_backward(res_[static_cast<size_t>(2 * i)],
                           tape.res[static_cast<size_t>(2 * i)], gt);
    nn::add_inplace(g, gt);
  }
  // down2 feature grad
  --fi;
  if (has_g)
    nn::add_inplace(g, feature_grads[fi]);
  else {
    g = feature_grads[fi];
    has_g = true;
  }
  g = nn::unit_backward(down2_, tape.down2, g);
  --fi;
  nn::add_inplace(g, feature_grads[fi]);
  g = nn::unit_backward(down1_, tape.down1, g);
  return nn::unit_backward(stem_, tape.stem, g);
}

Discriminator::Discriminator(int base_width, int n_layers, Rng& rng)
    : base_(base_width), layers_(n_layers) {
  int cin = 3;
  int jump = 1;
  receptive_field_ = 1;
  for (int i = 0; i < n_layers; ++i) {
    const int cout = base_width * (1 << std::min(i, 3));
    const int stride = i < n_layers - 1 ? 2 : 1;
    units_.push_back(make_unit(store_, "d" + std::to_string(i), cin, cout, 4, stride, 1, i > 0,
                               nn::Act::lrelu02, rng));
    receptive_field_ += 3 * jump;
    jump *= stride;
    cin = cout;
  }
  units_.push_back(make_unit(store_, "head", cin, 1, 4, 1, 1, false, nn::Act::none, rng));
  receptive_field_ += 3 * jump;
}

std::string Discriminator::arch_desc() const {
  return "patch_discriminator/v1 base=" + std::to_string(base_) +
         " layers=" + std::to_string(layers_) + " rf=" + std::to_string(receptive_field_);
}

Tensor Discriminator::forward(const Tensor& x, Tape* tape) const {
  if (tape) tape->units.resize(units_.size());
  Tensor h = x;
  for (size_t i = 0; i < units_.size(); ++i)
    h = nn::unit_forward(units_[i], h, tape ? &tape->units[i] : nullptr);
  return h;
}

Tensor Discriminator::backward(Tape& tape, const Tensor& gy) {
  Tensor g = gy;
  for (size_t i = units_.size(); i-- > 0;)
    g = nn::unit_backward(units_[i], tape.units[i], g);
  return g;
}

}  // namespace roboswap::gan
