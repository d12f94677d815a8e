#pragma once

#include <filesystem>
#include <iosfwd>

#include "ptc/ann/imitation.hpp"

namespace ptc::ann {

// Text format: a header with layer sizes, activation names, seed and scaler
// ranges, then each layer's weights (row-major, one row per line) and
// biases. Numbers use shortest round-trip form, so load(save(m)) == m
// bit for bit.
void write_model(std::ostream& out, const ImitationModel& model);
ImitationModel read_model(std::istream& in);

void save_model(const ImitationModel& model, const std::filesystem::path& path);
// Throws IngestionError (with line number) on malformed files.
ImitationModel load_model(const std::filesystem::path& path);

}  // namespace ptc::ann
