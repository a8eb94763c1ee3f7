#include "cutoffprobe/io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <openssl/evp.h>

#include "cutoffprobe/error.hpp"

namespace cutoffprobe::io {

std::vector<Line> split_records(std::string_view content) {
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        std::size_t end = content.find('\n', pos);
        if (end == std::string_view::npos) end = content.size();
        ++number;
        std::string_view line = content.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string_view::npos && line[first] != '#') {
            out.push_back({number, std::string(line)});
        }
        if (end == content.size()) break;
        pos = end + 1;
    }
    return out;
}

std::vector<Line> read_records(const std::filesystem::path& path) {
    return split_records(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string());
    std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw io_error("read failed: " + path.string());
    return data;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw io_error("write failed: " + path.string());
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw io_error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string file_digest(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::string Metadata::comment_block() const {
    std::ostringstream os;
    os << "# tool: " << kToolVersion << '\n';
    os << "# config: " << config.dump() << '\n';
    for (const auto& [role, digest] : inputs) {
        os << "# input " << role << ": sha256:" << digest << '\n';
    }
    return os.str();
}

nlohmann::ordered_json Metadata::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = kToolVersion;
    j["config"] = config;
    nlohmann::ordered_json in = nlohmann::ordered_json::object();
    for (const auto& [role, digest] : inputs) in[role] = "sha256:" + digest;
    j["inputs"] = in;
    return j;
}

}  // namespace cutoffprobe::io
