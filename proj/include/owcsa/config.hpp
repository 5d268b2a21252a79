#pragma once

namespace owcsa {

// Transmitter/receiver front-end parameters. Angles are radians, everything
// else SI. Defaults reproduce the reference indoor setup (30 mW IR LED,
// 1 cm^2 photodetector, 200 kHz noise bandwidth).
struct OpticalFrontend {
    double P_t = 0.03;        // transmit optical power [W]
    double eta = 0.8;         // optical-to-electrical conversion efficiency
    double A_r = 1e-4;        // photodetector area [m^2]
    double R_r = 0.4;         // responsivity [A/W]
    double T_s = 1.0;         // optical filter gain
    double zeta = 1.5;        // lens refractive index
    double Psi = 1.5707963267948966;       // receiver field of view [rad]
    double Phi_half = 1.0471975511965976;  // LED semi-angle at half illuminance [rad]
    double N0 = 1e-21;        // noise PSD [W/Hz]
    double B = 2e5;           // noise bandwidth [Hz]

    void validate() const;    // throws ConfigError naming the field
};

// Circular coverage cell: devices uniform on a disk of radius D, AP at
// height L over its center.
struct CellGeometry {
    double D = 4.0;           // coverage-disk radius [m]
    double L = 3.0;           // AP height above the device plane [m]

    void validate() const;
};

struct SystemConfig {
    OpticalFrontend optics;
    CellGeometry geometry;

    // Field checks plus the field-of-view condition atan(D/L) <= Psi that
    // the constant-geometry channel model requires.
    void validate() const;
};

} // namespace owcsa
