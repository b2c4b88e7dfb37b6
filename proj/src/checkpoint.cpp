#include <cstdint>
#include <cstring>
#include <fstream>

#include "tgcm/train.hpp"

namespace tgcm {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                            static_cast<unsigned char>((v >> 8) & 0xff),
                            static_cast<unsigned char>((v >> 16) & 0xff),
                            static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

void put_f32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) throw Error(ErrorCode::CorruptTensor, "unexpected end of file");
  return static_cast<std::uint32_t>(bytes[0]) |
         (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

float get_f32(std::istream& in) {
  std::uint32_t bits = get_u32(in);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

std::string get_string(std::istream& in, std::uint32_t len) {
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw Error(ErrorCode::CorruptTensor, "unexpected end of file");
  return s;
}

constexpr char kMagic[4] = {'T', 'G', 'C', 'M'};

}  // namespace

void save_checkpoint(const std::string& path, const std::string& snapshot,
                     const std::vector<NamedTensor>& tensors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out.write(kMagic, 4);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(snapshot.size()));
  out.write(snapshot.data(), static_cast<std::streamsize>(snapshot.size()));
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
    std::size_t expected = 1;
    for (std::uint32_t d : t.dims) {
      put_u32(out, d);
      expected *= d;
    }
    if (expected != t.data.size())
      throw Error(ErrorCode::CorruptTensor, "dims/data mismatch for " + t.name);
    for (float v : t.data) put_f32(out, v);
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

RawCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw Error(ErrorCode::BadMagic, path + " is not a checkpoint");
  RawCheckpoint ckpt;
  ckpt.version = get_u32(in);
  if (ckpt.version != kCheckpointVersion)
    throw Error(ErrorCode::VersionMismatch,
                "checkpoint version " + std::to_string(ckpt.version) +
                    ", supported " + std::to_string(kCheckpointVersion));
  ckpt.snapshot = get_string(in, get_u32(in));
  std::uint32_t count = get_u32(in);
  ckpt.tensors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    t.name = get_string(in, get_u32(in));
    std::uint32_t rank = get_u32(in);
    std::size_t total = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      t.dims.push_back(get_u32(in));
      total *= t.dims.back();
    }
    t.data.reserve(total);
    for (std::size_t k = 0; k < total; ++k) t.data.push_back(get_f32(in));
    ckpt.tensors.push_back(std::move(t));
  }
  return ckpt;
}

}  // namespace tgcm
