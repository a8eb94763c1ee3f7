#include "cutoffprobe/text.hpp"

namespace cutoffprobe::text {

namespace {

// Length of the UTF-8 sequence at s[i] and its code point; invalid input yields (1, U+FFFD).
std::pair<std::size_t, char32_t> next_code_point(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return {1, b0};
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {1, 0xFFFD};
    }
    if (i + len > s.size()) return {1, 0xFFFD};
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return {1, 0xFFFD};
        cp = (cp << 6) | (b & 0x3F);
    }
    return {len, cp};
}

bool is_space(char32_t c) {
    switch (c) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return c >= 0x2000 && c <= 0x200A;
    }
}

char lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_word_byte(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        auto [len, cp] = next_code_point(s, i);
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
    std::vector<std::string_view> words;
    std::size_t start = std::string_view::npos;
    for (std::size_t i = 0; i < s.size();) {
        auto [len, cp] = next_code_point(s, i);
        if (is_space(cp)) {
            if (start != std::string_view::npos) {
                words.push_back(s.substr(start, i - start));
                start = std::string_view::npos;
            }
        } else if (start == std::string_view::npos) {
            start = i;
        }
        i += len;
    }
    if (start != std::string_view::npos) words.push_back(s.substr(start));
    return words;
}

std::string word_prefix(std::string_view s, std::size_t n) {
    std::string out;
    std::size_t taken = 0;
    for (std::string_view w : split_whitespace(s)) {
        if (taken == n) break;
        if (taken > 0) out.push_back(' ');
        out.append(w);
        ++taken;
    }
    return out;
}

std::vector<std::string> lower_tokens(std::string_view s) {
    std::vector<std::string> out;
    for (std::string_view w : split_whitespace(s)) {
        std::string t(w);
        for (char& c : t) c = lower_ascii(c);
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<std::string> analyze(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (is_word_byte(c)) {
            cur.push_back(lower_ascii(c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

}  // namespace cutoffprobe::text
