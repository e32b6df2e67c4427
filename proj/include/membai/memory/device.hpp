#pragma once

#include <cmath>
#include <string>

#include "membai/errors.hpp"

namespace membai {

/// One MOSFET under the alpha-power law. Lengths in metres, voltages in volts.
struct DeviceParams {
  double width = 0.0;
  double l_eff = 0.0;
  double pc = 0.0;  // saturation current constant
  double pu = 0.0;  // saturation voltage constant
  double alpha = 1.3;
  double vth = 0.195;

  double aspect() const noexcept { return width / l_eff; }
};

/// V_d0 = P_u (V_GS - V_th)^(alpha/2); zero below threshold.
inline double saturation_voltage(double v_gs, const DeviceParams& dev) {
  const double overdrive = v_gs - dev.vth;
  if (overdrive <= 0.0) return 0.0;
  return dev.pu * std::pow(overdrive, dev.alpha / 2.0);
}

/// Drain current in amperes.
///   0                                          V_GS <= V_th
///   (W/L)(P_c/P_u)(V_GS - V_th)^(a/2) V_DS     V_DS <  V_d0
///   (W/L) P_c (V_GS - V_th)^a                  V_DS >= V_d0
inline double ids_alpha_power(double v_gs, double v_ds, const DeviceParams& dev) {
  if (v_gs < 0.0 || v_ds < 0.0 || !std::isfinite(v_gs) || !std::isfinite(v_ds)) {
    throw DomainError("alpha-power model needs finite non-negative voltages (v_gs=" +
                      std::to_string(v_gs) + ", v_ds=" + std::to_string(v_ds) + ")");
  }
  const double overdrive = v_gs - dev.vth;
  if (overdrive <= 0.0) return 0.0;
  const double half_pow = std::pow(overdrive, dev.alpha / 2.0);
  const double v_d0 = dev.pu * half_pow;
  if (v_ds < v_d0) return dev.aspect() * (dev.pc / dev.pu) * half_pow * v_ds;
  return dev.aspect() * dev.pc * half_pow * half_pow;
}

/// Switching-averaged drive current (I_H + I_L) / 2 with
/// I_H = I_DS(V_DD, V_DD/2) and I_L = I_DS(V_DD/2, V_DD).
inline double i_eff(const DeviceParams& dev, double v_dd) {
  if (!(v_dd > dev.vth)) {
    throw InfeasibleOperatingPointError("supply " + std::to_string(v_dd) +
                                        " V does not exceed threshold " +
                                        std::to_string(dev.vth) + " V");
  }
  const double i_high = ids_alpha_power(v_dd, v_dd / 2.0, dev);
  const double i_low = ids_alpha_power(v_dd / 2.0, v_dd, dev);
  return 0.5 * (i_high + i_low);
}

/// R_eff = V_DD / I_eff in ohms.
inline double r_eff(const DeviceParams& dev, double v_dd) { return v_dd / i_eff(dev, v_dd); }

}  // namespace membai
