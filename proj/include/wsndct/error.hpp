#pragma once

#include <stdexcept>

namespace wsndct {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgumentError : Error { using Error::Error; };
struct InvalidDataError : Error { using Error::Error; };
struct NotFoundError : Error { using Error::Error; };
struct UnsupportedModelError : Error { using Error::Error; };
struct ElectionFailureError : Error { using Error::Error; };
struct RoutingError : Error { using Error::Error; };
struct UndefinedMetricError : Error { using Error::Error; };
struct NoStatisticsError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace wsndct
