#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace greenroute {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter, option, or spec violates its documented domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed input file. `where` names the line or record field at fault.
class ParseError : public Error {
public:
    ParseError(std::string where, const std::string& what)
        : Error(where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

class Unreachable : public Error {
public:
    Unreachable(std::int64_t source, std::int64_t target)
        : Error("node " + std::to_string(target) + " is unreachable from node " +
                std::to_string(source)),
          source_(source), target_(target) {}

    std::int64_t source() const noexcept { return source_; }
    std::int64_t target() const noexcept { return target_; }

private:
    std::int64_t source_;
    std::int64_t target_;
};

class MissingTrafficSpeed : public Error {
public:
    explicit MissingTrafficSpeed(std::int64_t arc_id)
        : Error("arc " + std::to_string(arc_id) + " has no traffic speed"), arc_id_(arc_id) {}

    std::int64_t arc_id() const noexcept { return arc_id_; }

private:
    std::int64_t arc_id_;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

}  // namespace detail

}  // namespace greenroute
