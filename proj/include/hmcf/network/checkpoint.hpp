#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>

#include "hmcf/network/parameters.hpp"

namespace hmcf::nn {

/// A saved network together with the training step it was taken at.
struct Checkpoint {
  ParameterVector params;
  std::size_t step = 0;
  double total_loss = 0.0;
};

/// Text format, one `key: value` per line, then one hexfloat per parameter:
///
///   hmcf-checkpoint
///   format_version: 1
///   input_dim: <n>
///   output_dim: <n>
///   hidden_layers: <n>
///   hidden_width: <n>
///   parameter_count: <P>
///   step: <n>
///   total_loss: <hexfloat>
///   values:
///   <hexfloat>        (P lines, layer by layer: weights column-major, then bias)
///
/// Hexfloats make the round trip bit exact.
void write_checkpoint(std::ostream& os, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& is);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hmcf::nn
