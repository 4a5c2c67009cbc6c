#include "pcld/checkpoint.hpp"

#include <bit>
#include <cstring>

#include <fmt/format.h>

#include "pcld/digest.hpp"
#include "pcld/error.hpp"

namespace pcld {

namespace {

constexpr std::size_t kDigestBytes = 32;

void append_u64_le(std::string& out, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

std::uint64_t read_u64_le(std::string_view bytes, std::size_t offset) {
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i) {
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return value;
}

void append_f64_le(std::string& out, double x) { append_u64_le(out, std::bit_cast<std::uint64_t>(x)); }

std::string hex_to_bytes(const std::string& hex) {
  std::string out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<char>(std::stoi(hex.substr(i, 2), nullptr, 16)));
  }
  return out;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  nlohmann::json header;
  header["format_version"] = kCheckpointFormatVersion;
  header["model_config"] = checkpoint.params.config;
  header["train_config"] = checkpoint.train_config;
  header["epoch"] = checkpoint.epoch;
  header["val_loss"] = checkpoint.val_loss;
  header["vocab_hash"] = checkpoint.vocab_hash;
  auto& arrays = header["arrays"] = nlohmann::json::array();
  const auto layout = named_arrays(checkpoint.params);
  for (const auto& a : layout) {
    arrays.push_back({{"name", a.name}, {"rows", a.rows}, {"cols", a.cols}});
  }
  const std::string header_text = header.dump();

  std::string out(kCheckpointMagic);
  append_u64_le(out, header_text.size());
  out += header_text;
  for (const auto& a : layout) {
    for (const double x : a.values) {
      append_f64_le(out, x);
    }
  }
  out += hex_to_bytes(sha256_hex(out));
  return out;
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
  const std::size_t min_size = kCheckpointMagic.size() + 8 + kDigestBytes;
  if (bytes.size() < min_size || bytes.substr(0, kCheckpointMagic.size()) != kCheckpointMagic) {
    throw DataError("checkpoint: bad magic or truncated file");
  }
  const auto body = bytes.substr(0, bytes.size() - kDigestBytes);
  if (hex_to_bytes(sha256_hex(body)) != bytes.substr(body.size())) {
    throw DataError("checkpoint: digest mismatch (file corrupted)");
  }
  const std::uint64_t header_len = read_u64_le(bytes, kCheckpointMagic.size());
  const std::size_t header_start = kCheckpointMagic.size() + 8;
  if (header_len > body.size() - header_start) {
    throw DataError("checkpoint: header length exceeds file");
  }

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(body.substr(header_start, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("checkpoint: bad header: {}", e.what()));
  }
  if (header.value("format_version", 0) != kCheckpointFormatVersion) {
    throw DataError("checkpoint: unsupported format version");
  }

  Checkpoint ck;
  ModelParams shell;
  shell.config = header.at("model_config").get<ModelConfig>();
  try {
    ck.params = zeros_like(shell);
  } catch (const UsageError& e) {
    throw DataError(fmt::format("checkpoint: invalid model config: {}", e.what()));
  }
  ck.train_config = header.at("train_config").get<TrainConfig>();
  ck.epoch = header.at("epoch").get<std::size_t>();
  ck.val_loss = header.at("val_loss").get<double>();
  ck.vocab_hash = header.at("vocab_hash").get<std::string>();

  auto layout = named_arrays(ck.params);
  const auto& stored = header.at("arrays");
  if (stored.size() != layout.size()) {
    throw DataError("checkpoint: array count disagrees with model config");
  }
  std::size_t offset = header_start + header_len;
  for (std::size_t a = 0; a < layout.size(); ++a) {
    if (stored[a].at("name") != layout[a].name || stored[a].at("rows") != layout[a].rows ||
        stored[a].at("cols") != layout[a].cols) {
      throw DataError(fmt::format("checkpoint: array {} layout mismatch", a));
    }
    if (body.size() - offset < layout[a].values.size() * 8) {
      throw DataError("checkpoint: payload truncated");
    }
    for (auto& x : layout[a].values) {
      x = std::bit_cast<double>(read_u64_le(bytes, offset));
      offset += 8;
    }
  }
  if (offset != body.size()) {
    throw DataError("checkpoint: trailing bytes after payload");
  }
  return ck;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  write_file(path, serialize_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return deserialize_checkpoint(read_file(path)); }

}  // namespace pcld
