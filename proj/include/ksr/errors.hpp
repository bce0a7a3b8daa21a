#pragma once

#include <stdexcept>
#include <string>

namespace ksr {

// A numerical routine failed to produce a trustworthy result (non-convergence,
// overflow, rank collapse). Never used for usage mistakes.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// An eigenvalue of the matrix sits on (or within tolerance of) the closed
// negative real axis, where the principal logarithm is not defined.
class branch_cut_error : public numerical_error {
public:
    explicit branch_cut_error(const std::string& what) : numerical_error(what) {}
};

// The sampling period is at or beyond the identified dynamics' aliasing
// boundary; raised by identification when the principal log hits its cut.
class aliasing_boundary_error : public std::runtime_error {
public:
    explicit aliasing_boundary_error(const std::string& what) : std::runtime_error(what) {}
};

// Not enough samples for the requested embedding (N < 2M and friends).
class insufficient_data_error : public std::invalid_argument {
public:
    explicit insufficient_data_error(const std::string& what) : std::invalid_argument(what) {}
};

// A caller-supplied argument violates a documented precondition.
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// Requested evaluation time lies outside the range covered by the data.
class range_error : public std::out_of_range {
public:
    explicit range_error(const std::string& what) : std::out_of_range(what) {}
};

// A supposedly real-valued result carries an imaginary residual too large to
// discard; usually the symptom of a mis-chosen embedding dimension.
class inconsistency_error : public numerical_error {
public:
    explicit inconsistency_error(const std::string& what) : numerical_error(what) {}
};

} // namespace ksr
