#pragma once

#include <stdexcept>
#include <string>

namespace slag {

/** @brief Base class for all library errors. */
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** @brief The bilinear pairing B(z;w) is numerically zero; the point is off M. */
struct DegeneratePoint : Error {
  using Error::Error;
};

/** @brief A chart pivot coordinate is too small for the requested chart. */
struct ChartSingular : Error {
  using Error::Error;
};

/** @brief (zeta, xi) violates the bundle condition xi . conj(zeta) = 0. */
struct NotInBundle : Error {
  using Error::Error;
};

/** @brief Vector or matrix sizes do not match the case's ambient dimension. */
struct DimensionMismatch : Error {
  using Error::Error;
};

/** @brief A matrix expected in the -1 eigenspace of the involution is not there. */
struct NotInP : Error {
  using Error::Error;
};

/** @brief Re(tau) is outside the admissible open strip. */
struct OutOfStrip : Error {
  using Error::Error;
};

/** @brief tau is too close to a pole of the chart-form profile function. */
struct PoleProximity : Error {
  using Error::Error;
};

/** @brief ODE residual audit failed for the chosen step. */
struct StepTooLarge : Error {
  using Error::Error;
};

/** @brief The potential derivative lost positivity during integration. */
struct NonPositive : Error {
  using Error::Error;
};

/** @brief Requested N lies outside the tabulated range. */
struct OutOfTable : Error {
  using Error::Error;
};

/** @brief A volume-form frame does not have exactly 2n vectors on one base point. */
struct FrameSizeMismatch : Error {
  using Error::Error;
};

/** @brief The slice angle sits on the degenerate lattice. */
struct DegenerateSlice : Error {
  using Error::Error;
};

/** @brief Profile integration started at (or reached) a zero of G immediately. */
struct StagnationAtZeroOfG : Error {
  using Error::Error;
};

}  // namespace slag
