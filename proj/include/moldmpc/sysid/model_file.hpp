#pragma once

#include "moldmpc/sysid/arx.hpp"

#include <filesystem>
#include <string>

namespace moldmpc
{

inline constexpr const char* kModelFormat = "moldmpc-arx-model";
inline constexpr int kModelFormatVersion = 1;

/// Versioned JSON document: orders, baseline and row-major coefficient
/// matrices, plus the derived state-space matrices for reference.
std::string serialize_model(const ArxModel& model);
ArxModel deserialize_model(const std::string& text);

void save_model(const ArxModel& model, const std::filesystem::path& path);
ArxModel load_model(const std::filesystem::path& path);

} // namespace moldmpc
