#ifndef PTFUSION_ERRORS_HPP
#define PTFUSION_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ptfusion {

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// PGM codec
class MalformedHeader : public Error {
public:
    using Error::Error;
};
class TruncatedPixelData : public Error {
public:
    using Error::Error;
};
class UnsupportedMaxval : public Error {
public:
    using Error::Error;
};

// Raster operations on mismatched shapes.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Fuzzy thresholding
class EmptySubset : public Error {
public:
    using Error::Error;
};
class EmptyInput : public Error {
public:
    using Error::Error;
};
class NoContrast : public Error {
public:
    using Error::Error;
};

// Sensor array size must be exactly 3.
class BadArraySize : public Error {
public:
    using Error::Error;
};

// tracking_command called without a target in view.
class NoTarget : public Error {
public:
    using Error::Error;
};

// Scenario file problems; message carries the offending field/line.
class ConfigInvalid : public Error {
public:
    using Error::Error;
};

} // namespace ptfusion

#endif
