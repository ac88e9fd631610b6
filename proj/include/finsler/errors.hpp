#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

// Exit-code taxonomy used by the CLI. Library code throws; the CLI maps.
enum class ErrorCode : int {
    CheckFailure = 1,
    Parse = 2,
    Domain = 3,
    DegenerateMetric = 4,
    InsufficientOrders = 5,
};

struct Error : std::runtime_error {
    ErrorCode code;
    Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(ErrorCode::Parse,
                msg + " (line " + std::to_string(line_) + ", column " + std::to_string(col_) + ")"),
          line(line_), column(col_) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(ErrorCode::Domain, msg) {}
};

struct EvalError : Error {
    explicit EvalError(const std::string& msg) : Error(ErrorCode::Domain, msg) {}
};

struct DegenerateMetricError : Error {
    explicit DegenerateMetricError(const std::string& msg)
        : Error(ErrorCode::DegenerateMetric, msg) {}
};

struct InsufficientOrdersError : Error {
    explicit InsufficientOrdersError(const std::string& msg)
        : Error(ErrorCode::InsufficientOrders, msg) {}
};

}  // namespace finsler
