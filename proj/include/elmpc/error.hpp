#pragma once

#include <stdexcept>
#include <string>

namespace elmpc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration or malformed input document.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Metrics requested before the window holds enough samples.
class NotReadyError : public Error {
public:
    using Error::Error;
};

/// Entropy of an empty distribution.
class EmptyDistributionError : public Error {
public:
    using Error::Error;
};

/// Optimizer produced a non-finite cost. Aborts a closed-loop run.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Singular innovation covariance in the estimator.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// Not enough calibration samples to form a baseline.
class CalibrationError : public Error {
public:
    using Error::Error;
};

}  // namespace elmpc
