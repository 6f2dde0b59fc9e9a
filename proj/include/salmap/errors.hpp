#pragma once

#include <stdexcept>
#include <string>

namespace salmap {

// Base for all library errors so callers can map them to exit codes in one place.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteValue : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct EmptyLabelMap : Error { using Error::Error; };
struct DivergedLoss : Error { using Error::Error; };
struct MalformedModelFile : Error { using Error::Error; };
struct MissingUserLut : Error { using Error::Error; };
struct MissingSplitFile : Error { using Error::Error; };
struct MissingImage : Error { using Error::Error; };
struct MissingLabel : Error { using Error::Error; };
struct UnsupportedLabelIndex : Error { using Error::Error; };
struct NotPaletteIndexed : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace salmap
