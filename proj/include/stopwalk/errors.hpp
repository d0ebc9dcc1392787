#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace stopwalk {

// Every contract violation raised by the public API carries a stable
// machine-readable code ("HorizonExceeded", "NotBoundary", ...) next to the
// human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace stopwalk
