#pragma once

#include <complex>
#include <numbers>

// Units: hbar = 1, energies and frequencies in eV, lengths in nm, times in hbar/eV.

namespace plasmon {

using cplx = std::complex<double>;

inline constexpr double kHbarC = 197.3269804;  // eV nm
inline constexpr double kPi = std::numbers::pi;

/// Vacuum wavenumber (nm^-1) of a photon with energy `omega` (eV).
constexpr double vacuum_wavenumber(double omega) { return omega / kHbarC; }

}  // namespace plasmon
