#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace etlab {

enum class ErrorKind {
    invalid_argument,
    overflow,
    precision,
    resource,
    out_of_range,
    degenerate_input,
    io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace etlab
