// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "params.hpp"

namespace siamdiff {

uint64_t fnv1a64(const void* data, size_t n);
uint64_t fnv1a64(const std::string& s);

// Portable container: versioned header, tensor directory (name, shape,
// offset), then a contiguous little-endian f32 payload whose digest is stored
// in the header and verified on load. Parameters are f64 in memory and
// downcast at save time, so save -> load -> save is byte-identical.
void save_checkpoint(const std::string& path, const ModelParams& params, uint64_t arch_digest);

struct LoadedCheckpoint {
    ModelParams params;
    uint64_t arch_digest = 0;
};

// Throws IntegrityError on corruption (bad magic, overlapping offsets,
// payload digest mismatch).
LoadedCheckpoint load_checkpoint(const std::string& path);

// Additionally fails with ConfigError before any computation when the stored
// architecture digest does not match the expected one.
ModelParams load_checkpoint_checked(const std::string& path, uint64_t expected_arch_digest);

}  // namespace siamdiff
