#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cutoffprobe::text {

/// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD one byte at a time.
std::u32string decode_utf8(std::string_view s);

/// Splits on runs of Unicode whitespace. Views point into `s`.
std::vector<std::string_view> split_whitespace(std::string_view s);

/// First min(n, word count) whitespace-delimited words joined by single spaces.
std::string word_prefix(std::string_view s, std::size_t n);

/// Whitespace tokens, ASCII-lowercased. Used by the count LM and n-gram tables.
std::vector<std::string> lower_tokens(std::string_view s);

/// BM25 analyzer: ASCII-lowercase, split on any run of non-alphanumeric ASCII.
/// Bytes >= 0x80 count as word characters so UTF-8 letters stay inside tokens.
std::vector<std::string> analyze(std::string_view s);

inline constexpr std::string_view kAnalyzerName = "lowercase+split-non-alnum/v1";

}  // namespace cutoffprobe::text
