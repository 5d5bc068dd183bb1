#pragma once

#include <cstdint>
#include <string>

#include "lanesim/config.hpp"
#include "lanesim/qmodel.hpp"

namespace lanesim {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckpointMeta {
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
};

// Decimal-text checkpoint: header (architecture, compose mode, config echo,
// seed, step count) followed by the flat parameter list of each network in
// the order A, C, B_pre, B_sen, B_max. Values are written with 17
// significant digits so load(save(q)) reproduces q exactly.
void save_checkpoint(const QuadraticQ& q, const RunConfig& config_echo,
                     const CheckpointMeta& meta, const std::string& path);

struct LoadedCheckpoint {
  QuadraticQ model;
  CheckpointMeta meta;
  std::string config_echo;
};

// Rejects checkpoints whose header disagrees with the expected architecture
// and truncated files, with a parameter-count diagnostic.
LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace lanesim
