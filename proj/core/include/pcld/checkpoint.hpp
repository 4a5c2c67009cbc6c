#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pcld/trainer.hpp"

namespace pcld {

/// Checkpoint container, version 1:
///
///   bytes 0-7    magic "PCLDCKPT"
///   bytes 8-15   header length H, uint64 little-endian
///   next H       header JSON: format_version, model_config, train_config,
///                epoch, val_loss, vocab_hash, arrays [{name, rows, cols}]
///   payload      every array in canonical order (see named_arrays), each
///                row-major, as IEEE-754 binary64 little-endian
///   last 32      SHA-256 of all preceding bytes
inline constexpr std::string_view kCheckpointMagic = "PCLDCKPT";
inline constexpr int kCheckpointFormatVersion = 1;

std::string serialize_checkpoint(const Checkpoint& checkpoint);

/// Throws DataError on bad magic, digest mismatch, truncation or array layout
/// that disagrees with the stored model config.
Checkpoint deserialize_checkpoint(std::string_view bytes);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace pcld
