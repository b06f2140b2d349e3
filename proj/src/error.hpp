#pragma once

#include <stdexcept>
#include <string>

namespace aggsched {

enum class Errc {
    ok = 0,
    parse,
    disconnected,
    duplicate_node,
    deployment,
    size_cap,
    livelock,
    validation,
    config,
    io,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace aggsched
