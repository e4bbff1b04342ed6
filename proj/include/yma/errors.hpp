#ifndef YMA_ERRORS_HPP
#define YMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace yma {

/// Mismatched group tags, grids, charts or form degrees.
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input outside an operation's mathematical domain (branch cuts, bad parameters).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace yma

#endif
