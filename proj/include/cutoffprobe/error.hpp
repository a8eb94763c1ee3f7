#pragma once

#include <stdexcept>
#include <string>

namespace cutoffprobe {

// Values double as CLI exit codes.
enum class ErrorKind : int {
    Config = 2,
    Io = 3,
    Provider = 4,
    Degenerate = 5,
    IndexFormat = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

inline Error config_error(const std::string& msg) { return Error(ErrorKind::Config, msg); }
inline Error io_error(const std::string& msg) { return Error(ErrorKind::Io, msg); }

}  // namespace cutoffprobe
