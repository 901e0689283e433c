#pragma once

#include <stdexcept>
#include <string>

namespace snrml {

// Every failure the library raises derives from Error, so callers can catch
// one type at the boundary and still branch on the precise condition when
// they need to.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constellation order not in the supported family (psk:M, qam:M square, pam:M).
struct UnsupportedOrder : Error { using Error::Error; };

// Fading model name not recognized.
struct UnsupportedModel : Error { using Error::Error; };

// A block length that does not divide the quantity being partitioned.
struct InvalidPartition : Error { using Error::Error; };

// Basis matrix with dependent columns (too few rows, repeated nodes).
struct RankDeficient : Error { using Error::Error; };

// A normal-equation solve whose pivots collapse to working precision.
struct IllConditioned : Error { using Error::Error; };

// Mismatched vector/matrix extents passed into a routine.
struct DimensionMismatch : Error { using Error::Error; };

// Noise estimate collapsed below 1e-15; downstream ratios would be garbage.
struct DegenerateNoiseEstimate : Error { using Error::Error; };

// Analytic moment formulas need enough residual degrees of freedom to exist.
struct DegreesOfFreedomTooSmall : Error { using Error::Error; };

// A bound or ratio was requested with sigma2 <= 0.
struct ZeroNoise : Error { using Error::Error; };

// Fisher information with no usable observation (all symbols zero).
struct SingularFim : Error { using Error::Error; };

// A statistical test invoked with too small a sample to be meaningful.
struct TooFewSamples : Error { using Error::Error; };

// Invalid or unknown experiment configuration content.
struct ConfigError : Error { using Error::Error; };

// Filesystem trouble while reading configs or writing artifacts.
struct IoError : Error { using Error::Error; };

}  // namespace snrml
