#pragma once

#include <stdexcept>
#include <string>

namespace hofnet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operand shapes do not conform to the operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

// An input value is NaN or infinite.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

// A metric was asked to consume an empty point set.
class EmptySetError : public Error {
public:
    using Error::Error;
};

// A point falls outside the world bounds of a voxel grid.
class BoundsError : public Error {
public:
    using Error::Error;
};

// A file or text blob does not parse under its declared format.
class FormatError : public Error {
public:
    using Error::Error;
};

// Two parameter sets that must share a layer schedule do not.
class SpecError : public Error {
public:
    using Error::Error;
};

// A documented caller obligation was violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A path query starts or ends inside an occupied voxel.
class EndpointError : public Error {
public:
    using Error::Error;
};

} // namespace hofnet
