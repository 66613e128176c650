// Compares the serial reference kernels against the OpenMP kernels at the
// convolution shapes the networks actually use, and reports throughput.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "roboswap/core/kernels.hpp"
#include "roboswap/core/rng.hpp"
#include "roboswap/core/tensor.hpp"

using namespace roboswap;

namespace {

struct Case {
  const char* label;
  kernels::Conv2dDims d;
};

double run_forward(kernels::Backend b, const kernels::Conv2dDims& d, const Tensor& x,
                   const Tensor& w, const Tensor& bias, Tensor& y, int reps) {
  kernels::set_backend(b);
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r)
    kernels::conv2d_forward(d, x.data(), w.data(), bias.data(), y.data());
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 20;
  if (argc > 1) reps = std::stoi(argv[1]);

  std::vector<Case> cases;
  auto add_case = [&](const char* label, int n, int cin, int h, int w, int cout, int k, int stride,
                      int pad) {
    Case c{label, {}};
    c.d.n = n;
    c.d.cin = cin;
    c.d.h = h;
    c.d.w = w;
    c.d.cout = cout;
    c.d.kh = k;
    c.d.kw = k;
    c.d.stride = stride;
    c.d.pad = pad;
    c.d.finalize();
    cases.push_back(c);
  };

  // Shapes from the generator, discriminator, VAE and denoiser.
  add_case("gen stem 7x7 3->16 @64", 1, 3, 64, 64, 16, 7, 1, 3);
  add_case("gen down 3x3 16->32 @64s2", 1, 16, 64, 64, 32, 3, 2, 1);
  add_case("gen res 3x3 64->64 @16", 1, 64, 16, 16, 64, 3, 1, 1);
  add_case("vae enc 3x3 32->64 @16s2", 16, 32, 16, 16, 64, 3, 2, 1);
  add_case("denoiser 3x3 64->64 @8", 16, 64, 8, 8, 64, 3, 1, 1);

  std::printf("%-28s %12s %12s %10s %10s\n", "case", "ref ms", "omp ms", "speedup", "GMAC/s");
  for (const auto& c : cases) {
    Rng rng(1);
    Tensor x({c.d.n, c.d.cin, c.d.h, c.d.w});
    Tensor w({c.d.cout, c.d.cin, c.d.kh, c.d.kw});
    Tensor bias({c.d.cout});
    for (auto& v : x.raw()) v = static_cast<float>(rng.uniform(-1, 1));
    for (auto& v : w.raw()) v = static_cast<float>(rng.uniform(-1, 1));
    Tensor y_ref({c.d.n, c.d.cout, c.d.ho, c.d.wo});
    Tensor y_omp(y_ref.shape());

    const double t_ref = run_forward(kernels::Backend::reference, c.d, x, w, bias, y_ref, reps);
    const double t_omp = run_forward(kernels::Backend::parallel, c.d, x, w, bias, y_omp, reps);

    bool equal = y_ref.raw() == y_omp.raw();
    const double macs = static_cast<double>(c.d.n) * c.d.cout * c.d.ho * c.d.wo * c.d.cin *
                        c.d.kh * c.d.kw;
    std::printf("%-28s %12.3f %12.3f %9.2fx %10.2f %s\n", c.label, t_ref * 1e3, t_omp * 1e3,
                t_ref / t_omp, macs / t_omp * 1e-9, equal ? "" : "MISMATCH");
    if (!equal) return 1;
  }
  kernels::set_backend(kernels::Backend::parallel);
  return 0;
}
