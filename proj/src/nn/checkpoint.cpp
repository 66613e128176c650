#include "roboswap/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "roboswap/core/error.hpp"

namespace roboswap::nn {

namespace {
constexpr char kMagic[4] = {'R', 'S', 'C', 'K'};
}

void Checkpoint::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("checkpoint: cannot write " + path);

  Json header;
  header["kind"] = kind;
  header["arch_hash"] = arch_hash;
  header["config"] = config;
  header["extra"] = extra;
  header["step"] = step;
  Json tlist = Json::array();
  for (const auto& [name, t] : tensors) {
    Json entry;
    entry["name"] = name;
    entry["shape"] = t.shape();
    tlist.push_back(entry);
  }
  header["tensors"] = tlist;
  const std::string htext = header.dump();

  out.write(kMagic, 4);
  const uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const uint64_t hlen = htext.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  for (const auto& [name, t] : tensors)
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(t.numel() * sizeof(float)));
  if (!out) throw IoError("checkpoint: write failed for " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingData("checkpoint: cannot open " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw InvalidArgument("checkpoint: bad magic in " + path);
  uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (version != kVersion)
    throw InvalidArgument("checkpoint: unsupported version " + std::to_string(version));
  uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  std::string htext(hlen, '\0');
  in.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw InvalidArgument("checkpoint: truncated header in " + path);

  Json header = Json::parse(htext);
  Checkpoint ck;
  ck.kind = header.at("kind").get<std::string>();
  ck.arch_hash = header.at("arch_hash").get<std::string>();
  ck.config = header.at("config");
  ck.extra = header.at("extra");
  ck.step = header.at("step").get<int64_t>();
  for (const auto& entry : header.at("tensors")) {
    const auto name = entry.at("name").get<std::string>();
    const auto shape = entry.at("shape").get<std::vector<int>>();
    Tensor t(shape);
    in.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(t.numel() * sizeof(float)));
    if (!in) throw InvalidArgument("checkpoint: truncated tensor '" + name + "' in " + path);
    ck.tensors.emplace_back(name, std::move(t));
  }
  return ck;
}

}  // namespace roboswap::nn
