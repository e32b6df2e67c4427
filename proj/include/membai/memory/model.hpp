#pragma once

// Access time and per-access dynamic energy of one memory architecture under
// one variation sample.
//
// The critical path has six stages, each an RC hop from a driver of one
// device class:
//
//   htree      request and reply over the bank/sub-bank H-tree, plus the
//              broadcast across the mats of the selected sub-bank
//   decode     bank select + row predecode + decode,
//              log2(banks) + log2(rows) gate stages
//   wordline   cols cells on one wordline
//   bitline    rows cells discharged by the cell access device (cell supply)
//   sense_amp  fixed
//   output     fixed pin load
//
// Stage delay = 0.69 R_eff(class, vdd) C_stage + wire Elmore term, where the
// wire term r l (0.38 c l + 0.69 C_load) does not depend on the sample.

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <string_view>

#include "membai/design_space.hpp"
#include "membai/memory/device.hpp"
#include "membai/memory/tech.hpp"

namespace membai {

enum class Stage : std::size_t { htree, decode, wordline, bitline, sense_amp, output };
inline constexpr std::size_t kStageCount = 6;
inline constexpr std::array<std::string_view, kStageCount> kStageNames{
    "htree", "decode", "wordline", "bitline", "sense_amp", "output"};

inline constexpr double kStepDelayFactor = 0.69;        // ln 2
inline constexpr double kDistributedWireFactor = 0.38;

/// Sample-independent part of one stage.
struct StageLoad {
  DeviceClass driver = DeviceClass::decoder;
  double capacitance = 0.0;  // F, summed over the series hops of the stage
  double wire_delay = 0.0;   // s, summed over the hops
};

/// Everything about an architecture the per-sample evaluation needs.
struct ArchitectureLoads {
  std::array<StageLoad, kStageCount> stages{};
  double switched_periph = 0.0;  // F switched per access at the peripheral supply
  double switched_cell = 0.0;    // F switched per access at the cell supply
};

struct PerfMetrics {
  double t_acc = 0.0;  // s
  double p_dyn = 0.0;  // J per access
};

struct StageDelays {
  std::array<double, kStageCount> delay{};

  double operator[](Stage s) const noexcept { return delay[static_cast<std::size_t>(s)]; }
  double total() const noexcept {
    double t = 0.0;
    for (double d : delay) t += d;
    return t;
  }
};

namespace detail {

struct Hop {
  double cap = 0.0;
  double wire = 0.0;
};

/// Driver load and Elmore wire term for a wire of `length` ending in `load`.
inline Hop wire_hop(const WireParams& w, double length, double load) {
  const double c_wire = w.c_per_len * length;
  const double r_wire = w.r_per_len * length;
  return Hop{c_wire + load,
             r_wire * (kDistributedWireFactor * c_wire + kStepDelayFactor * load)};
}

inline int log2_exact(std::uint64_t v) { return std::countr_zero(v); }

}  // namespace detail

/// Geometry-derived capacitances; everything in the model that is not a
/// function of supply or threshold voltage.
inline ArchitectureLoads compute_loads(const MemoryArchitecture& arch, const TechConfig& tech) {
  const WireParams& w = tech.wire;
  const double rows = static_cast<double>(arch.n_rows);
  const double cols = static_cast<double>(arch.n_cols);
  const double mats = static_cast<double>(arch.n_mats);

  const double w_dec = tech.width(DeviceClass::decoder);
  const double w_wl = tech.width(DeviceClass::wordline_driver);
  const double w_cell = tech.width(DeviceClass::cell_access);
  const double w_sa = tech.width(DeviceClass::sense_amp);
  const double w_out = tech.width(DeviceClass::output_driver);

  // Mat = 2 x 2 sub-arrays with a decoder strip and a sense-amp strip.
  const double mat_w = 2.0 * cols * w.pitch + tech.decoder_strip;
  const double mat_h = 2.0 * rows * w.pitch + tech.sense_strip;
  const double subbank_area = mats * mat_w * mat_h;
  const double bank_area = static_cast<double>(arch.n_subbanks) * subbank_area +
                           tech.bank_overhead_area;
  const double total_area = static_cast<double>(arch.n_banks) * bank_area;

  ArchitectureLoads out;
  const double addr_bits =
      static_cast<double>(std::max(1, std::countr_zero(arch.capacity_bits) -
                                          std::countr_zero(std::bit_ceil(
                                              static_cast<std::uint64_t>(tech.data_bits)))));
  const double data_bits = static_cast<double>(tech.data_bits);

  // Every bank has its own bus from the array port, so reaching a bank is a
  // single hop across half the array. Inside the bank an H-tree with one
  // level per sub-bank doubling leads to the sub-bank, then a broadcast
  // reaches its mats.
  {
    const int levels = detail::log2_exact(arch.n_subbanks);
    const double repeater = w.c_gate * w_out;
    const auto route = detail::wire_hop(w, 0.5 * std::sqrt(total_area), repeater);
    double tree_cap = route.cap;
    double tree_wire = route.wire;
    for (int j = 0; j < levels; ++j) {
      const auto hop = detail::wire_hop(w, 0.5 * std::sqrt(bank_area / std::ldexp(1.0, j)), repeater);
      tree_cap += hop.cap;
      tree_wire += hop.wire;
    }
    const auto bcast = detail::wire_hop(w, std::sqrt(subbank_area), mats * w.c_gate * w_dec);
    // Request travels in, data travels back over the same path.
    StageLoad& s = out.stages[static_cast<std::size_t>(Stage::htree)];
    s.driver = DeviceClass::output_driver;
    s.capacitance = 2.0 * (tree_cap + bcast.cap);
    s.wire_delay = 2.0 * (tree_wire + bcast.wire);
    out.switched_periph += (addr_bits + data_bits) * tree_cap + addr_bits * bcast.cap;
  }

  // Bank select plus row predecode/decode inside one mat; the first stage
  // also drives the predecode lines along the mat height. The row address is
  // broadcast to every bank.
  {
    const double gate_stages = std::max(1, detail::log2_exact(arch.n_rows)) +
                               detail::log2_exact(arch.n_banks);
    const double stage_cap = tech.decode_fanout * w.c_gate * w_dec + w.c_drain * w_dec;
    const auto predecode = detail::wire_hop(w, mat_h, 0.0);
    StageLoad& s = out.stages[static_cast<std::size_t>(Stage::decode)];
    s.driver = DeviceClass::decoder;
    s.capacitance = gate_stages * stage_cap + predecode.cap;
    s.wire_delay = predecode.wire;
    const double row_bits = std::max(1, detail::log2_exact(arch.n_rows));
    out.switched_periph += mats * (gate_stages * stage_cap + tech.predecode_lines * predecode.cap) +
                           static_cast<double>(arch.n_banks) * row_bits * w.c_per_len *
                               std::sqrt(bank_area);
  }

  // Wordline: two access gates per cell.
  {
    const auto hop =
        detail::wire_hop(w, cols * w.pitch, cols * 2.0 * w.c_gate * w_cell + w.c_drain * w_wl);
    StageLoad& s = out.stages[static_cast<std::size_t>(Stage::wordline)];
    s.driver = DeviceClass::wordline_driver;
    s.capacitance = hop.cap;
    s.wire_delay = hop.wire;
    out.switched_periph += mats * hop.cap;
  }

  // Bitline: one access drain per row plus the sense-amp input. Every column
  // of the active sub-array in every mat of the sub-bank swings.
  {
    const auto hop =
        detail::wire_hop(w, rows * w.pitch, rows * w.c_drain * w_cell + w.c_gate * w_sa);
    StageLoad& s = out.stages[static_cast<std::size_t>(Stage::bitline)];
    s.driver = DeviceClass::cell_access;
    s.capacitance = hop.cap;
    s.wire_delay = hop.wire;
    out.switched_cell += mats * cols * hop.cap;
  }

  {
    StageLoad& s = out.stages[static_cast<std::size_t>(Stage::sense_amp)];
    s.driver = DeviceClass::sense_amp;
    s.capacitance = w.c_drain * w_sa + w.c_gate * w_out;
    out.switched_periph += mats * cols * s.capacitance;
  }

  {
    StageLoad& s = out.stages[static_cast<std::size_t>(Stage::output)];
    s.driver = DeviceClass::output_driver;
    s.capacitance = w.c_drain * w_out + tech.output_load;
    out.switched_periph += data_bits * s.capacitance;
  }
  return out;
}

/// R_eff of every device class for this sample. Throws
/// InfeasibleOperatingPointError if any class sits at or above its supply.
inline std::array<double, kDeviceClassCount> class_resistances(const VariationSample& theta,
                                                               const TechConfig& tech) {
  std::array<double, kDeviceClassCount> r{};
  for (std::size_t i = 0; i < kDeviceClassCount; ++i) {
    const auto c = static_cast<DeviceClass>(i);
    r[i] = r_eff(tech.device(c, theta.threshold(c)), theta.supply(c));
  }
  return r;
}

inline StageDelays stage_delays(const ArchitectureLoads& loads,
                                const std::array<double, kDeviceClassCount>& resistance) {
  StageDelays d;
  for (std::size_t i = 0; i < kStageCount; ++i) {
    const StageLoad& s = loads.stages[i];
    d.delay[i] = kStepDelayFactor * resistance[static_cast<std::size_t>(s.driver)] *
                     s.capacitance +
                 s.wire_delay;
  }
  return d;
}

/// Sum of 0.5 C V^2 over the switched capacitance of one access.
inline double switching_energy(const ArchitectureLoads& loads, const VariationSample& theta) {
  return 0.5 * loads.switched_periph * theta.vdd_periph * theta.vdd_periph +
         0.5 * loads.switched_cell * theta.vdd_cell * theta.vdd_cell;
}

inline PerfMetrics evaluate(const ArchitectureLoads& loads, const VariationSample& theta,
                            const TechConfig& tech) {
  return PerfMetrics{stage_delays(loads, class_resistances(theta, tech)).total(),
                     switching_energy(loads, theta)};
}

inline StageDelays access_time_breakdown(const MemoryArchitecture& arch,
                                         const VariationSample& theta, const TechConfig& tech) {
  return stage_delays(compute_loads(arch, tech), class_resistances(theta, tech));
}

inline double access_time(const MemoryArchitecture& arch, const VariationSample& theta,
                          const TechConfig& tech) {
  return access_time_breakdown(arch, theta, tech).total();
}

/// Energy per access (the "dynamic power" figure of merit), J.
inline double dynamic_power(const MemoryArchitecture& arch, const VariationSample& theta,
                            const TechConfig& tech) {
  return switching_energy(compute_loads(arch, tech), theta);
}

}  // namespace membai
