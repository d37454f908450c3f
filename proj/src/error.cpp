#include "neuroevo/error.hpp"

namespace neuroevo {

const char* to_string(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::InvalidArgument: return "invalid-argument";
        case ErrorCategory::Config: return "config";
        case ErrorCategory::Data: return "data";
        case ErrorCategory::Budget: return "budget";
        case ErrorCategory::Io: return "io";
        case ErrorCategory::Runtime: return "runtime";
    }
    return "unknown";
}

void throw_dimension_mismatch(const std::string& what, std::size_t expected, std::size_t actual) {
    throw Error(ErrorCategory::InvalidArgument, what + " length mismatch: expected " + std::to_string(expected) +
                                                    ", got " + std::to_string(actual));
}

}  // namespace neuroevo
