#pragma once

#include <cstddef>
#include <vector>

namespace deepfir {

enum class PhaseKind { linear, minimum };

// The unit of prediction and synthesis: one set of FIR taps.
struct FirFilter {
  std::vector<double> taps;
  PhaseKind phase_kind = PhaseKind::linear;

  std::size_t size() const { return taps.size(); }

  // [1, 0, ..., 0]: pass-through.
  static FirFilter impulse(std::size_t tap_count);
};

}  // namespace deepfir
