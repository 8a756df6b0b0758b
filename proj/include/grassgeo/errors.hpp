#pragma once

// Exception types shared by all grassgeo modules.

#include <stdexcept>

namespace grassgeo {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a scalar kernel was evaluated within tolerance of one of its poles
struct KernelPole : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
// a user-supplied map failed while a numeric differential was being built
struct EvaluationFailure : Error { using Error::Error; };
// the geodesic left the dense chart V0 (a singular value reached pi/2)
struct ChartEscape : Error { using Error::Error; };
// the plane lies on the polar divisor: its top block is singular
struct OnPolarDivisor : Error { using Error::Error; };
struct DiastasisUndefined : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };
struct OutsideDomain : Error { using Error::Error; };
struct KNotBlockDiagonal : Error { using Error::Error; };
struct ZeroTangent : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct DegenerateWeights : Error { using Error::Error; };
struct Overflow : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace grassgeo
