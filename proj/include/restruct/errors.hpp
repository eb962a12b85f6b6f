#pragma once

#include <stdexcept>
#include <string>

namespace restruct {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Two estimates live on different scales (level count, total, or best level).
class scale_mismatch : public error {
public:
    using error::error;
};

/// Instance violates its structural invariants (overlapping groups,
/// negative capacity, non-square matrix, ...).
class invalid_instance : public error {
public:
    using error::error;
};

/// A change-operation universe or selection is contradictory.
class invalid_ops : public error {
public:
    using error::error;
};

class empty_input : public error {
public:
    using error::error;
};

/// No admissible solution exists at all.
class infeasible : public error {
public:
    using error::error;
};

/// A solution exists but not within the change-cost budget.
class infeasible_with_budget : public infeasible {
public:
    using infeasible::infeasible;
};

class no_spanning_tree : public infeasible {
public:
    using infeasible::infeasible;
};

/// Instance exceeds the size cap of an exact enumeration routine.
class too_large : public error {
public:
    using error::error;
};

/// Malformed instance document.
class parse_error : public error {
public:
    using error::error;
};

} // namespace restruct
