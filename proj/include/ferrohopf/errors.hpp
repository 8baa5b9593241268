#pragma once

#include <stdexcept>
#include <string>

namespace ferrohopf {

/// Raised when a solver fails or a closed-form expression hits a singular term.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what, std::string term = {})
        : std::runtime_error(what), term_(std::move(term)) {}

    /// Name of the offending term or solver, empty when not applicable.
    const std::string& term() const noexcept { return term_; }

private:
    std::string term_;
};

/// A search that legitimately came back empty (no orbit within budget, no crossing).
class not_found_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ferrohopf
