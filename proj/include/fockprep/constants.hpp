#pragma once

// CODATA 2018 values, rounded to 10 significant digits.
namespace fockprep::constants {

inline constexpr double kHbar = 1.054571818e-34;           // J s
inline constexpr double kAtomicMassUnit = 1.660539067e-27;  // kg
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace fockprep::constants
