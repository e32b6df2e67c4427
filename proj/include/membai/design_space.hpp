#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "membai/errors.hpp"

namespace membai {

/// Banks -> sub-banks -> mats -> four sub-arrays of rows x cols cells.
struct MemoryArchitecture {
  std::uint64_t n_banks = 1;
  std::uint64_t n_subbanks = 1;
  std::uint64_t n_mats = 1;
  std::uint64_t n_rows = 1;
  std::uint64_t n_cols = 1;
  std::uint64_t capacity_bits = 4;

  std::uint64_t bits() const noexcept { return n_banks * n_subbanks * n_mats * 4 * n_rows * n_cols; }
  friend auto operator<=>(const MemoryArchitecture&, const MemoryArchitecture&) = default;
};

/// Inclusive [min, max] base-2 exponent for one count.
struct ExponentRange {
  int min = 0;
  int max = 0;
};

struct EnumerationRanges {
  std::uint64_t capacity_bits = 1u << 19;
  ExponentRange banks{0, 3};
  ExponentRange subbanks{0, 3};
  ExponentRange mats{0, 2};
  ExponentRange rows{6, 12};
  ExponentRange cols{4, 7};
};

struct ValidationResult {
  bool valid = true;
  std::vector<std::string> violations;
};

namespace detail {

inline bool in_range(std::uint64_t v, ExponentRange r) {
  if (!std::has_single_bit(v)) return false;
  const int e = std::countr_zero(v);
  return e >= r.min && e <= r.max;
}

inline void check_ranges(const EnumerationRanges& r) {
  const ExponentRange* all[] = {&r.banks, &r.subbanks, &r.mats, &r.rows, &r.cols};
  for (const auto* e : all) {
    if (e->min < 0 || e->max > 62 || e->min > e->max) {
      throw EmptyDesignSpaceError("exponent range [" + std::to_string(e->min) + ", " +
                                  std::to_string(e->max) + "] is invalid");
    }
  }
  if (!std::has_single_bit(r.capacity_bits)) {
    throw EmptyDesignSpaceError("capacity_bits must be a power of two, got " +
                                std::to_string(r.capacity_bits));
  }
}

}  // namespace detail

/// Lists every violated constraint; never throws.
inline ValidationResult validate_architecture(const MemoryArchitecture& a,
                                              const EnumerationRanges& r) {
  ValidationResult out;
  auto fail = [&](std::string msg) {
    out.valid = false;
    out.violations.push_back(std::move(msg));
  };
  const std::uint64_t counts[] = {a.n_banks, a.n_subbanks, a.n_mats, a.n_rows, a.n_cols};
  const char* names[] = {"n_banks", "n_subbanks", "n_mats", "n_rows", "n_cols"};
  const ExponentRange ranges[] = {r.banks, r.subbanks, r.mats, r.rows, r.cols};
  for (int i = 0; i < 5; ++i) {
    if (!std::has_single_bit(counts[i])) {
      fail(std::string("power-of-two: ") + names[i] + " = " + std::to_string(counts[i]));
    } else if (!detail::in_range(counts[i], ranges[i])) {
      fail(std::string("range: ") + names[i] + " = " + std::to_string(counts[i]));
    }
  }
  if (a.capacity_bits != r.capacity_bits) {
    fail("capacity: architecture declares " + std::to_string(a.capacity_bits) +
         " bits, ranges require " + std::to_string(r.capacity_bits));
  }
  if (a.bits() != a.capacity_bits) {
    fail("capacity identity: banks*subbanks*mats*4*rows*cols = " + std::to_string(a.bits()) +
         " != " + std::to_string(a.capacity_bits));
  }
  return out;
}

/// All in-range power-of-two tuples whose cell count equals the capacity,
/// in lexicographic (banks, subbanks, mats, rows, cols) order.
inline std::vector<MemoryArchitecture> enumerate_architectures(const EnumerationRanges& r) {
  detail::check_ranges(r);
  const int cap_exp = std::countr_zero(r.capacity_bits);
  std::vector<MemoryArchitecture> out;
  for (int b = r.banks.min; b <= r.banks.max; ++b) {
    for (int s = r.subbanks.min; s <= r.subbanks.max; ++s) {
      for (int m = r.mats.min; m <= r.mats.max; ++m) {
        for (int row = r.rows.min; row <= r.rows.max; ++row) {
          // Four sub-arrays per mat contribute the extra 2 bits of exponent.
          const int col = cap_exp - 2 - b - s - m - row;
          if (col < r.cols.min || col > r.cols.max) continue;
          out.push_back(MemoryArchitecture{1ull << b, 1ull << s, 1ull << m, 1ull << row,
                                           1ull << col, r.capacity_bits});
        }
      }
    }
  }
  if (out.empty()) {
    throw EmptyDesignSpaceError("no architecture of " + std::to_string(r.capacity_bits) +
                                " bits fits the configured exponent ranges");
  }
  return out;
}

}  // namespace membai
