#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

namespace cutoffprobe {

inline constexpr std::size_t kDefaultCharCap = 20000;

/// Character-level Levenshtein distance (Myers/Hyyro bit-parallel, 64 rows per word).
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// Exact distance when it is <= max_distance; nullopt as soon as a lower bound on the final
/// distance exceeds max_distance. `lower_bound`, when given, receives that bound on exit.
std::optional<std::size_t> levenshtein_bounded(std::u32string_view a, std::u32string_view b,
                                               std::size_t max_distance, std::size_t* lower_bound = nullptr);

struct NormalizedEdit {
    double value;  // distance / len(matched); a proven lower bound when !exact
    bool exact;
};

/// Levenshtein(matched, version) / len(matched) over UTF-8 code points, each side truncated to
/// char_cap code points first. Throws Error(Config) when matched is empty.
double normalized_edit(std::string_view matched, std::string_view version, std::size_t char_cap = kDefaultCharCap);

/// As normalized_edit, but gives up once the value provably exceeds `threshold`.
NormalizedEdit normalized_edit_bounded(std::u32string_view matched, std::u32string_view version, double threshold);

}  // namespace cutoffprobe
