#pragma once

// Unit conventions used throughout: energies and wavenumbers in 1/cm,
// time in fs, coordinates dimensionless (mass-frequency scaled).

namespace cichirp {

// 2*pi*c: angular frequency [rad/fs] per wavenumber [1/cm]
inline constexpr double kRadFsPerWavenumber = 1.8836515673e-4;

// Boltzmann constant [1/cm per K], normalized so k_B * 300 K = 208.52 1/cm
inline constexpr double kBoltzmannCmPerK = 208.52 / 300.0;

inline constexpr const char* kToolName = "cichirp";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace cichirp
