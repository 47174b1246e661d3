#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rdhei {

// Every failure carries a stable machine-readable name (checked by the CLI
// exit contract and by tests) plus a human message.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void fail(const char* name, const std::string& message) {
    throw Error(name, message);
}

} // namespace rdhei
