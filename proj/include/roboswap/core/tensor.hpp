#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "roboswap/core/error.hpp"

namespace roboswap {

// Dense row-major float tensor. Layout conventions are the owner's business
// (videos are NCHW, latents CNHW, weights OIHW).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
    data_.assign(static_cast<size_t>(numel_of(shape_)), 0.0f);
  }
  Tensor(std::vector<int> shape, float fill) : shape_(std::move(shape)) {
    data_.assign(static_cast<size_t>(numel_of(shape_)), fill);
  }

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }

  static int64_t numel_of(const std::vector<int>& shape) {
    int64_t n = 1;
    for (int d : shape) {
      if (d < 0) throw InvalidArgument("Tensor: negative dimension");
      n *= d;
    }
    return n;
  }

  const std::vector<int>& shape() const { return shape_; }
  int dim(int i) const { return shape_.at(static_cast<size_t>(i)); }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  float& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  float operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  std::vector<float>& raw() { return data_; }
  const std::vector<float>& raw() const { return data_; }

  // 4-d accessor (a,b,c,d) for the common NCHW case.
  float& at4(int a, int b, int c, int d) {
    return data_[((static_cast<int64_t>(a) * shape_[1] + b) * shape_[2] + c) * shape_[3] + d];
  }
  float at4(int a, int b, int c, int d) const {
    return data_[((static_cast<int64_t>(a) * shape_[1] + b) * shape_[2] + c) * shape_[3] + d];
  }
  float& at3(int a, int b, int c) {
    return data_[(static_cast<int64_t>(a) * shape_[1] + b) * shape_[2] + c];
  }
  float at3(int a, int b, int c) const {
    return data_[(static_cast<int64_t>(a) * shape_[1] + b) * shape_[2] + c];
  }
  float& at2(int a, int b) { return data_[static_cast<int64_t>(a) * shape_[1] + b]; }
  float at2(int a, int b) const { return data_[static_cast<int64_t>(a) * shape_[1] + b]; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  std::string shape_str() const {
    std::string s = "[";
    for (size_t i = 0; i < shape_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(shape_[i]);
    }
    return s + "]";
  }

 private:
  std::vector<int> shape_;
  std::vector<float> data_;
};

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* where) {
  if (!a.same_shape(b))
    throw InvalidArgument(std::string(where) + ": shape mismatch " + a.shape_str() + " vs " +
                          b.shape_str());
}

}  // namespace roboswap
