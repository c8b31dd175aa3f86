#pragma once

#include <stdexcept>
#include <string>

namespace latinlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Error tied to one cell. Row and column are 1-based, as in the text format.
class CellError : public Error {
public:
    CellError(const std::string& what, int row, int column)
        : Error(what + " at row " + std::to_string(row) + ", column " + std::to_string(column)),
          row_(row), column_(column) {}

    int row() const noexcept { return row_; }
    int column() const noexcept { return column_; }

private:
    int row_;
    int column_;
};

class ShapeError : public CellError {
public:
    using CellError::CellError;
};

class SymbolError : public CellError {
public:
    using CellError::CellError;
};

class RepeatError : public CellError {
public:
    using CellError::CellError;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class CycleError : public Error {
public:
    using Error::Error;
};

class NotFlippable : public Error {
public:
    using Error::Error;
};

class JoinPrecondition : public Error {
public:
    using Error::Error;
};

/// A search exceeded its node budget or an order limit.
class ResourceError : public Error {
public:
    using Error::Error;
};

} // namespace latinlab
