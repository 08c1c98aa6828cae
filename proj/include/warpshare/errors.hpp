#pragma once

#include <stdexcept>
#include <string>

namespace warpshare {

struct ZeroBlocksFit : std::runtime_error {
    explicit ZeroBlocksFit(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidThreshold : std::runtime_error {
    explicit InvalidThreshold(const std::string& what) : std::runtime_error(what) {}
};

struct IndexOutOfRange : std::runtime_error {
    explicit IndexOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ", col " +
                             std::to_string(col_) + ": " + msg),
          line(line_),
          column(col_) {}
};

struct InvalidKernel : std::runtime_error {
    explicit InvalidKernel(const std::string& what) : std::runtime_error(what) {}
};

struct ProtocolViolation : std::logic_error {
    explicit ProtocolViolation(const std::string& what) : std::logic_error(what) {}
};

struct SimulatorInvariantViolation : std::logic_error {
    explicit SimulatorInvariantViolation(const std::string& what) : std::logic_error(what) {}
};

struct CycleLimitExceeded : std::runtime_error {
    explicit CycleLimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace warpshare
