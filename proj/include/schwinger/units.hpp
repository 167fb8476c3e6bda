#pragma once

// Internal units: angular frequency in rad/ns, time in ns, voltage in nV.
// Frequencies are labelled "GHz" in outputs, so a "kHz" rate means 1e-6 rad/ns.

namespace schwinger::units {

inline constexpr double kPi = 3.14159265358979323846;

/// Reduced Planck constant (J s).
inline constexpr double kHbar = 1.054571817e-34;
/// Elementary charge (C).
inline constexpr double kElementaryCharge = 1.602176634e-19;

/// 1 ueV / hbar expressed in rad/ns.
inline constexpr double kUeV = kElementaryCharge * 1e-6 / kHbar * 1e-9;

inline constexpr double kGHz = 1.0;
inline constexpr double kMHz = 1e-3;
inline constexpr double kKHz = 1e-6;

inline constexpr double kMicrosecond = 1e3;  // ns

inline constexpr double ueV_to_rad_per_ns(double ueV) { return ueV * kUeV; }
inline constexpr double rad_per_ns_to_ueV(double w) { return w / kUeV; }

}  // namespace schwinger::units
