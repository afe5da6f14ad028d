#include "etlab/error.hpp"

namespace etlab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::overflow: return "overflow";
        case ErrorKind::precision: return "precision";
        case ErrorKind::resource: return "resource";
        case ErrorKind::out_of_range: return "out-of-range";
        case ErrorKind::degenerate_input: return "degenerate-input";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

}  // namespace etlab
