#pragma once

#include <stdexcept>
#include <string>

namespace osmfix {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Polygon has too little area (or covers no pixel centers) to be rasterized.
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

// A mask with zero set bits was passed where coverage is required.
class EmptyMask : public Error {
public:
    using Error::Error;
};

// A window rectangle is empty after clipping to the raster.
class EmptyWindow : public Error {
public:
    using Error::Error;
};

// The evidence histogram never reaches a bimodal shape; callers treat this
// as "remove nothing".
class UnimodalHistogram : public Error {
public:
    using Error::Error;
};

// Malformed input file (GeoJSON, .pmap, .dgrd, PNG) or value out of range.
class FormatError : public Error {
public:
    using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Internal invariant violated (e.g. footprint without a group displacement).
class InconsistentState : public Error {
public:
    using Error::Error;
};

// Synthetic scene generation could not place all buildings.
class PackingError : public Error {
public:
    using Error::Error;
};

// No prediction overlaps any ground-truth polygon; the ASSD metric is absent.
class NoOverlap : public Error {
public:
    using Error::Error;
};

} // namespace osmfix
