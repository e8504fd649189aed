#pragma once

#include "hdmrge/embedding.hpp"

#include <filesystem>
#include <iosfwd>

namespace hdmrge {

inline constexpr int kModelFormatVersion = 1;

/// Line-oriented text record; layout documented in README.md ("Model file").
/// Doubles are written in shortest round-trip form, so save/load is exact.
void save_model(const EmbeddingModel& model, std::ostream& out);
void save_model(const EmbeddingModel& model, const std::filesystem::path& path);

EmbeddingModel load_model(std::istream& in);
EmbeddingModel load_model(const std::filesystem::path& path);

}  // namespace hdmrge
