#include "cpi/num/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace cpi::num {

namespace {

constexpr std::string_view kMagic = "CPICKPT";

void put_double(std::string& out, double value) {
  auto bits = std::bit_cast<std::uint64_t>(value);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xff));
    bits >>= 8;
  }
}

double get_double(const unsigned char* bytes) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[i];
  return std::bit_cast<double>(bits);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  nlohmann::json header;
  header["config"] = checkpoint.config;
  header["vocab_hash"] = checkpoint.vocab_hash;
  header["params"] = nlohmann::json::array();
  for (const auto& p : checkpoint.params) {
    header["params"].push_back({{"name", p.name}, {"shape", p.tensor.shape()}});
  }
  std::string out = std::string(kMagic) + " " + std::to_string(kCheckpointVersion) + "\n";
  out += header.dump() + "\n";
  for (const auto& p : checkpoint.params) {
    for (double v : p.tensor.data()) put_double(out, v);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write checkpoint " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open checkpoint " + path.string());
  std::string magic_line, header_line;
  std::getline(file, magic_line);
  std::istringstream magic(magic_line);
  std::string tag;
  int version = 0;
  magic >> tag >> version;
  if (tag != kMagic) throw FormatError(path.string() + ":1", "not a checkpoint file");
  if (version != kCheckpointVersion) {
    throw FormatError(path.string() + ":1",
                      "unsupported checkpoint version " + std::to_string(version));
  }
  std::getline(file, header_line);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ":2", e.what());
  }
  Checkpoint checkpoint;
  checkpoint.config = header.at("config");
  checkpoint.vocab_hash = header.at("vocab_hash").get<std::string>();
  std::vector<unsigned char> bytes(8);
  for (const auto& entry : header.at("params")) {
    const Shape shape = entry.at("shape").get<Shape>();
    std::vector<double> values(numel(shape));
    for (double& v : values) {
      if (!file.read(reinterpret_cast<char*>(bytes.data()), 8)) {
        throw FormatError(path.string(), "truncated parameter data");
      }
      v = get_double(bytes.data());
    }
    checkpoint.params.push_back(
        {entry.at("name").get<std::string>(), Tensor::from(shape, std::move(values))});
  }
  if (file.peek() != std::char_traits<char>::eof()) {
    throw FormatError(path.string(), "trailing bytes after parameter data");
  }
  return checkpoint;
}

void assign_parameters(std::span<NamedTensor> target, std::span<const NamedTensor> source) {
  std::map<std::string_view, const Tensor*> by_name;
  for (const auto& s : source) by_name[s.name] = &s.tensor;
  for (auto& t : target) {
    auto it = by_name.find(t.name);
    if (it == by_name.end()) throw Error("checkpoint is missing parameter '" + t.name + "'");
    if (it->second->shape() != t.tensor.shape()) {
      throw ShapeError("checkpoint parameter '" + t.name + "': " +
                       shape_str(it->second->shape()) + " vs " + shape_str(t.tensor.shape()));
    }
    auto dst = t.tensor.mutable_data();
    std::copy(it->second->data().begin(), it->second->data().end(), dst.begin());
  }
}

}  // namespace cpi::num
