#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hignn {

/// Shortest text form that still round-trips a double exactly (17 significant
/// digits); used by every CSV/JSON emitter in the project.
std::string format_g17(double v);

std::vector<std::string> split_csv_line(const std::string& line);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// SplitMix64 — used to derive independent per-item RNG seeds.
std::uint64_t splitmix64(std::uint64_t state);

/// FNV-1a over a byte string.
std::uint64_t fnv1a_hash(const std::string& bytes);

}  // namespace hignn
