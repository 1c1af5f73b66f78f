#pragma once

#include <stdexcept>
#include <string>

namespace spikerate {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input violates an operation precondition (bad value, bad ordering, bad config).
struct RejectedInput : Error {
    explicit RejectedInput(const std::string& msg) : Error(msg) {}
};

// Not enough data to compute the requested quantity.
struct InsufficientData : Error {
    explicit InsufficientData(const std::string& msg) : Error(msg) {}
};

// A file could not be parsed; carries the 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& msg, long line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    long line;
};

// Simulation exhausted its step budget without producing the requested spikes.
struct NonFiringRegime : Error {
    NonFiringRegime(const std::string& msg, unsigned long long budget_steps)
        : Error(msg + " (budget: " + std::to_string(budget_steps) + " steps)"),
          budget(budget_steps) {}
    unsigned long long budget;
};

// A requested closed-form quantity diverges for these parameters.
struct DivergentQuantity : Error {
    explicit DivergentQuantity(const std::string& msg) : Error(msg) {}
};

} // namespace spikerate
