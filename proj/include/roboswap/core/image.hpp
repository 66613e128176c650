#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace roboswap {

// 8-bit image, HWC interleaved, 1 (gray) or 3 (RGB) channels.
struct ImageU8 {
  int h = 0, w = 0, channels = 0;
  std::vector<uint8_t> data;

  uint8_t& at(int y, int x, int c) {
    return data[(static_cast<size_t>(y) * w + x) * channels + c];
  }
  uint8_t at(int y, int x, int c) const {
    return data[(static_cast<size_t>(y) * w + x) * channels + c];
  }
};

ImageU8 read_png(const std::string& path);
void write_png(const std::string& path, const ImageU8& img);

}  // namespace roboswap
