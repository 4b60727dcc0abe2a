#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gelshatter/analysis.hpp"
#include "gelshatter/engine.hpp"
#include "gelshatter/observables.hpp"

namespace gelshatter::io {

// ---- flat key = value configuration files ---------------------------------

/// Parses a flat `key = value` file: one pair per line, `#` comments,
/// blank lines ignored, later keys override earlier ones. Throws
/// std::invalid_argument with the line number on malformed input.
std::map<std::string, std::string> read_flat_file(const std::filesystem::path& path);
std::map<std::string, std::string> parse_flat_text(const std::string& text);

double parse_double(const std::string& value, const std::string& key);
std::uint64_t parse_uint(const std::string& value, const std::string& key);
bool parse_bool(const std::string& value, const std::string& key);
std::vector<std::string> split_list(const std::string& value);

// ---- CSV -------------------------------------------------------------------

void write_samples_csv(const std::filesystem::path& path,
                       std::span<const TrajectorySample> samples);
void write_shatter_events_csv(const std::filesystem::path& path,
                              std::span<const ShatterEvent> events);
void write_size_value_csv(const std::filesystem::path& path, const std::string& key_header,
                          const std::string& value_header,
                          std::span<const std::pair<std::uint64_t, double>> rows);
void write_heatmap_csv(const std::filesystem::path& path, const HeatMap& map);
void write_heatmap_sidecar(const std::filesystem::path& path, const HeatMap& map,
                           std::uint64_t total_mass);
void write_scaling_csv(const std::filesystem::path& path,
                       std::span<const analysis::ScalingPoint> points);

// ---- JSON ------------------------------------------------------------------

std::string trajectory_to_json(const Trajectory& trajectory);
Trajectory trajectory_from_json(const std::string& text);
void write_trajectory_json(const std::filesystem::path& path, const Trajectory& trajectory);
Trajectory read_trajectory_json(const std::filesystem::path& path);

std::string checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const std::string& text);
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(const std::filesystem::path& path);

std::string histogram_to_json(const SizeHistogram& hist);
SizeHistogram histogram_from_json(const std::string& text);

// ---- files -----------------------------------------------------------------

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// FNV-1a digest of the file contents, hex-encoded.
std::string file_digest(const std::filesystem::path& path);

}  // namespace gelshatter::io
