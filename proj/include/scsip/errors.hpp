#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scsip {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class TopologyError : public Error {
public:
    using Error::Error;
};

class UnsupportedDegree : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class StateError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Constraint matrix of a cell is not of full row rank.
class SingularConstraint : public Error {
public:
    SingularConstraint(const std::string& what, std::size_t cell)
        : Error(what + " (cell " + std::to_string(cell) + ")"), cell_(cell) {}
    std::size_t cell() const { return cell_; }

private:
    std::size_t cell_;
};

class RankAnomaly : public Error {
public:
    using Error::Error;
};

/// A non-positive pivot was met while factoring a matrix expected to be SPD.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

} // namespace scsip
