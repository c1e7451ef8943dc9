#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fase {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scalar parameter is outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Two grids that must agree in shape do not.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A loss mask has no support samples.
class MaskError : public Error {
public:
    using Error::Error;
};

/// A file (PGM, FDIC, FGRM) could not be parsed.
class FormatError : public Error {
public:
    using Error::Error;
};

class DegenerateAtomError : public Error {
public:
    DegenerateAtomError(std::size_t atom, const std::string& what)
        : Error(what), atom_(atom) {}
    std::size_t atom() const noexcept { return atom_; }

private:
    std::size_t atom_;
};

/// Every atom has zero weighted energy on the support area.
class NoSelectableAtomError : public Error {
public:
    using Error::Error;
};

/// A Gram table was built for a different (dictionary, weight) pair.
class StaleTableError : public Error {
public:
    using Error::Error;
};

class UnsupportedDictionaryError : public Error {
public:
    using Error::Error;
};

/// Integer overflow in an operation-count formula.
class RangeError : public Error {
public:
    using Error::Error;
};

}  // namespace fase
