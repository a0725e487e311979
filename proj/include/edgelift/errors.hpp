#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace edgelift {

/// Error categories, aligned one-to-one with the C API status codes.
enum class ErrorCode : int {
    ok = 0,
    io = 1,
    schema = 2,
    invalid_argument = 3,
    disconnected_graph = 4,
    domain = 5,
    non_finite = 6,
    rank_deficient = 7,
    degenerate_window = 8,
    internal = 9,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgumentError : public Error {
public:
    explicit InvalidArgumentError(const std::string& what)
        : Error(ErrorCode::invalid_argument, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

class DisconnectedGraphError : public Error {
public:
    explicit DisconnectedGraphError(const std::string& what = "graph is not connected")
        : Error(ErrorCode::disconnected_graph, what) {}
};

class NonFiniteInputError : public Error {
public:
    explicit NonFiniteInputError(const std::string& what = "matrix has non-finite entries")
        : Error(ErrorCode::non_finite, what) {}
};

/// Model evaluated outside its domain. `time` is attached when raised
/// inside a simulation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what, std::optional<double> time = std::nullopt)
        : Error(ErrorCode::domain, what), time_(time) {}

    std::optional<double> time() const noexcept { return time_; }

private:
    std::optional<double> time_;
};

class NonFiniteStateError : public Error {
public:
    NonFiniteStateError(const std::string& what, double time)
        : Error(ErrorCode::non_finite, what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class RankDeficientOutputChannelError : public Error {
public:
    RankDeficientOutputChannelError(int agent, const std::string& what)
        : Error(ErrorCode::rank_deficient, what), agent_(agent) {}

    int agent() const noexcept { return agent_; }

private:
    int agent_;
};

/// Scenario validation failure; `path` is the JSON path of the offending node.
class SchemaError : public Error {
public:
    SchemaError(const std::string& path, const std::string& reason)
        : Error(ErrorCode::schema, path + ": " + reason), path_(path), reason_(reason) {}

    const std::string& path() const noexcept { return path_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string path_;
    std::string reason_;
};

class DegenerateWindowError : public Error {
public:
    explicit DegenerateWindowError(const std::string& what)
        : Error(ErrorCode::degenerate_window, what) {}
};

}  // namespace edgelift
