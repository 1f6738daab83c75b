#pragma once

#include <stdexcept>
#include <string>

namespace telewm {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// matkernel
struct NotHermitian : Error { using Error::Error; };
struct NegativeSpectrum : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };

// states / metrics
struct OutOfRange : Error { using Error::Error; };
struct InvalidState : Error { using Error::Error; };
struct AsymmetricCorrelation : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };

// channels / weakmeas
struct InvalidParams : Error { using Error::Error; };
struct UnsupportedFamily : Error { using Error::Error; };
struct IncompleteKraus : Error { using Error::Error; };
struct SuccessProbTooSmall : Error { using Error::Error; };

// experiments
struct InvalidBracket : Error { using Error::Error; };

// cli
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace telewm
