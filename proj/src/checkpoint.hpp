#pragma once

#include <string>
#include <vector>

#include "tensor.hpp"

namespace cghi {

// Flat binary checkpoint: magic, version, then per tensor a name, shape and
// little-endian float64 payload. Parameters come first, then the norm
// buffers (running statistics), all through the same record format. A
// plain-text manifest of names and shapes is written next to it
// ("<path>.manifest.txt").
void save_checkpoint(const std::string& path, const std::string& tag,
                     const std::vector<const Param*>& params,
                     const std::vector<NormBuffer>& buffers = {});

// Loads values into an existing parameter list; names and shapes must match
// the file exactly (same order).
void load_checkpoint(const std::string& path, const std::string& expected_tag,
                     const std::vector<Param*>& params,
                     const std::vector<NormBuffer>& buffers = {});

// Reads just the tag (model variant) stored in a checkpoint.
std::string checkpoint_tag(const std::string& path);

}  // namespace cghi
