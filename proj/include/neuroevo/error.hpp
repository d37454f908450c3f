#pragma once

#include <stdexcept>
#include <string>

namespace neuroevo {

enum class ErrorCategory {
    InvalidArgument,  // precondition or dimension violation
    Config,           // malformed or inconsistent experiment configuration
    Data,             // dataset ingestion or splitting failure
    Budget,           // FE budget cannot cover the mandatory initialization cost
    Io,               // file system errors
    Runtime,
};

const char* to_string(ErrorCategory category);

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

// Raises Error{InvalidArgument} naming the expected and actual lengths.
[[noreturn]] void throw_dimension_mismatch(const std::string& what, std::size_t expected, std::size_t actual);

}  // namespace neuroevo
