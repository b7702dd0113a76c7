#include <bit>
#include <cstring>
#include <fstream>

#include "newsent/error.hpp"
#include "newsent/nn/train.hpp"

namespace newsent::nn {

namespace {

constexpr char kMagic[8] = {'N', 'S', 'C', 'K', 'P', 'T', '1', '\n'};

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

Checkpoint Checkpoint::capture(const Network<float>& net, std::uint64_t vocab_hash) {
  Checkpoint c;
  c.config = net.config();
  c.vocab_hash = vocab_hash;
  for (const auto& p : net.parameters()) c.parameters.push_back({p.name, p.value.shape, p.value.data});
  return c;
}

Network<float> Checkpoint::network() const {
  Network<float> net(config);
  auto& params = net.parameters();
  if (params.size() != parameters.size())
    throw Error(ErrorKind::Parse, "checkpoint parameter count does not match its config");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].name != parameters[i].name || params[i].value.shape != parameters[i].shape)
      throw Error(ErrorKind::Parse, "checkpoint parameter does not match its config", parameters[i].name);
    params[i].value.data = parameters[i].values;
  }
  return net;
}

void Checkpoint::save(const std::filesystem::path& path) const {
  nlohmann::json header;
  header["config"] = config.to_json();
  header["vocab_hash"] = vocab_hash;
  header["parameters"] = nlohmann::json::array();
  for (const auto& p : parameters) header["parameters"].push_back({{"name", p.name}, {"shape", p.shape}});
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write checkpoint", path.string());
  out.write(kMagic, 8);
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& p : parameters) {
    for (float v : p.values) {
      const auto bits = std::bit_cast<std::uint32_t>(v);
      const char b[4] = {static_cast<char>(bits & 0xFF), static_cast<char>((bits >> 8) & 0xFF),
                         static_cast<char>((bits >> 16) & 0xFF), static_cast<char>((bits >> 24) & 0xFF)};
      out.write(b, 4);
    }
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing checkpoint", path.string());
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open checkpoint", path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw Error(ErrorKind::Parse, "not a checkpoint file", path.string());
  const std::uint64_t len = get_u64(in);
  if (!in || len > (1u << 26)) throw Error(ErrorKind::Parse, "bad checkpoint header length", path.string());
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw Error(ErrorKind::Parse, "truncated checkpoint header", path.string());

  Checkpoint c;
  try {
    const auto header = nlohmann::json::parse(text);
    c.config = NetworkConfig::from_json(header.at("config"));
    c.vocab_hash = header.at("vocab_hash").get<std::uint64_t>();
    for (const auto& p : header.at("parameters"))
      c.parameters.push_back({p.at("name").get<std::string>(), p.at("shape").get<std::vector<std::size_t>>(), {}});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("invalid checkpoint header: ") + e.what(), path.string());
  }
  for (auto& p : c.parameters) {
    p.values.resize(Tensor<float>::count(p.shape));
    for (auto& v : p.values) {
      unsigned char b[4];
      in.read(reinterpret_cast<char*>(b), 4);
      if (!in) throw Error(ErrorKind::Parse, "truncated checkpoint data", path.string());
      const std::uint32_t bits = b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
      v = std::bit_cast<float>(bits);
    }
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorKind::Parse, "trailing bytes after checkpoint data", path.string());
  c.network();
  return c;
}

}  // namespace newsent::nn
