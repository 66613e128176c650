#include "roboswap/nn/unit.hpp"

namespace roboswap::nn {

namespace {

Tensor activate(Act act, const Tensor& x) {
  switch (act) {
    case Act::none: return x;
    case Act::relu: return relu(x);
    case Act::lrelu02: return leaky_relu(x, 0.2f);
    case Act::sigmoid: return sigmoid(x);
    case Act::tanh_: return tanh_act(x);
    case Act::silu: return silu(x);
  }
  return x;
}

}  // namespace

Tensor unit_forward(const Unit& u, const Tensor& x, UnitCache* c) {
  Tensor y = conv2d(x, u.w->v, u.b ? &u.b->v : nullptr, u.stride, u.pad);
  if (c) c->x = x;
  if (u.gamma) y = instance_norm(y, u.gamma->v, u.beta->v, c ? &c->nc : nullptr);
  if (c) c->preact = y;
  Tensor out = activate(u.act, y);
  if (c && (u.act == Act::sigmoid || u.act == Act::tanh_)) c->out = out;
  return out;
}

Tensor unit_backward(const Unit& u, UnitCache& c, const Tensor& gy) {
  Tensor g;
  switch (u.act) {
    case Act::none: g = gy; break;
    case Act::relu: relu_backward(c.preact, gy, &g); break;
    case Act::lrelu02: leaky_relu_backward(c.preact, 0.2f, gy, &g); break;
    case Act::sigmoid: sigmoid_backward(c.out, gy, &g); break;
    case Act::tanh_: tanh_backward(c.out, gy, &g); break;
    case Act::silu: silu_backward(c.preact, gy, &g); break;
  }
  if (u.gamma) {
    Tensor gn;
    instance_norm_backward(c.nc, u.gamma->v, g, &gn, &u.gamma->g, &u.beta->g);
    g = std::move(gn);
  }
  Tensor gx;
  conv2d_backward(c.x, u.w->v, u.stride, u.pad, g, &gx, &u.w->g, u.b ? &u.b->g : nullptr);
  return gx;
}

}  // namespace roboswap::nn
