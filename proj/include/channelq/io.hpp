#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "channelq/bounds.hpp"
#include "channelq/channel.hpp"
#include "channelq/degrade.hpp"
#include "channelq/polar.hpp"
#include "channelq/upgrade.hpp"

namespace channelq {

/// Parses {"input_dist": [...], "transition": [[...], ...], "labels": [...]?}.
/// Structural problems raise ParseError; probability problems raise the
/// channel validation errors.
BuiltChannel parse_channel(std::string_view text);
BuiltChannel read_channel_file(const std::filesystem::path& path);

/// Serializes with 17 significant digits so values round-trip exactly.
std::string format_channel(const Channel& ch);
void write_channel_file(const std::filesystem::path& path, const Channel& ch);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

nlohmann::json channel_json(const Channel& ch);
nlohmann::json matrix_json(const Matrix& m);
nlohmann::json to_json(const DegradeResult& r);
nlohmann::json to_json(const UpgradeResult& r);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const PolarReport& r);

}  // namespace channelq
