#pragma once

#include <stdexcept>
#include <string>

namespace klp {

// Raised when an operation cannot certify a required inequality at the
// current working precision. Callers retry with more bits; an uncertified
// answer is never returned.
class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace klp
