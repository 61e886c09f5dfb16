#pragma once

// SI values (CODATA 2018).
namespace meissner::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double rb87_mass = 86.909180527 * atomic_mass_unit;  // kg
inline constexpr double standard_gravity = 9.8;  // m/s^2, rounded
inline constexpr double rb87_d2_wavelength = 780e-9;  // m

}  // namespace meissner::constants
