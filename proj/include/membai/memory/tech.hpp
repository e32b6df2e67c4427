#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "membai/memory/device.hpp"

namespace membai {

/// Transistor populations whose threshold voltage is drawn independently per
/// Monte Carlo trial. Only `cell_access` runs from the cell supply.
enum class DeviceClass : std::size_t {
  decoder,
  wordline_driver,
  cell_access,
  sense_amp,
  output_driver,
};

inline constexpr std::size_t kDeviceClassCount = 5;

inline constexpr std::array<std::string_view, kDeviceClassCount> kDeviceClassNames{
    "decoder", "wordline_driver", "cell_access", "sense_amp", "output_driver"};

/// Interconnect and parasitic constants. Capacitances per unit transistor
/// width are in F/m.
struct WireParams {
  double r_per_len = 8.89e5;  // ohm/m
  double c_per_len = 3.61e-10; // F/m
  double pitch = 0.6e-6;      // cell pitch, m
  double c_gate = 1.0e-9;
  double c_drain = 0.6e-9;
};

/// Technology and organisation constants. Defaults are 65nm-plausible and
/// were tuned so that the default design space has a clear but narrow winner;
/// they are not a silicon calibration.
struct TechConfig {
  double vth0 = 0.195;
  double vth_sigma_ratio = 0.15;
  double alpha = 1.3;
  double pc = 4.5e-5;  // A / V^alpha per unit W/L
  double pu = 0.55;    // V^(1 - alpha/2)
  double l_eff = 65e-9;
  std::array<double, kDeviceClassCount> w_over_l{5.92, 8.68, 2.57, 3.68, 45.89};
  WireParams wire;
  std::vector<double> supply_levels{0.8, 0.9, 1.0, 1.1};

  // Organisation constants used by the access-path model.
  double decoder_strip = 20e-6;      // row-decoder width beside each mat, m
  double sense_strip = 5.89e-6;      // sense-amp height below each mat, m
  double bank_overhead_area = 5.07e-10;  // control/IO area per bank, m^2
  double decode_fanout = 3.29;
  double predecode_lines = 6.39;     // predecode wires spanning each mat's height
  double output_load = 14.7e-15;     // F at the array output pin
  unsigned data_bits = 64;

  double vth_sigma() const noexcept { return vth0 * vth_sigma_ratio; }

  double width(DeviceClass c) const noexcept {
    return w_over_l[static_cast<std::size_t>(c)] * l_eff;
  }

  DeviceParams device(DeviceClass c, double vth) const noexcept {
    return DeviceParams{width(c), l_eff, pc, pu, alpha, vth};
  }
};

/// One Monte Carlo draw of the operating conditions.
struct VariationSample {
  double vdd_periph = 1.1;
  double vdd_cell = 1.1;
  std::array<double, kDeviceClassCount> vth{0.195, 0.195, 0.195, 0.195, 0.195};

  double supply(DeviceClass c) const noexcept {
    return c == DeviceClass::cell_access ? vdd_cell : vdd_periph;
  }
  double threshold(DeviceClass c) const noexcept { return vth[static_cast<std::size_t>(c)]; }
};

/// Every class at V_th0, both supplies at `vdd`.
inline VariationSample nominal_sample(const TechConfig& tech, double vdd) {
  VariationSample s;
  s.vdd_periph = vdd;
  s.vdd_cell = vdd;
  s.vth.fill(tech.vth0);
  return s;
}

}  // namespace membai
