#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace cutoffprobe::io {

inline constexpr std::string_view kToolVersion = "cutoffprobe 0.3.0";

struct Line {
    std::size_t number;  // 1-based
    std::string text;
};

/// Reads a line-delimited record file, skipping blank lines and '#' metadata lines.
std::vector<Line> read_records(const std::filesystem::path& path);
std::vector<Line> split_records(std::string_view content);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

/// Provenance header carried by every file the CLI writes.
struct Metadata {
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, std::string>> inputs;  // (role, sha256)

    /// "# "-prefixed lines, for CSV and JSONL outputs.
    std::string comment_block() const;
    nlohmann::ordered_json to_json() const;
};

}  // namespace cutoffprobe::io
