#pragma once

#include <map>
#include <optional>
#include <string>

#include "nuctrace/types.hpp"

namespace nuctrace {

/// Self-contained record of one trace verification: every asserted number
/// travels with the truncation parameters and tail bound behind it.
struct SpectralReport {
  CVector eigenvalues;  // sorted by modulus, descending
  Complex matrix_trace{0.0, 0.0};
  Complex eigenvalue_sum{0.0, 0.0};
  Complex pairing_trace{0.0, 0.0};
  std::optional<Real> closed_form_target;
  std::string target_provenance;  // "closed-form" or "truncated-series"
  std::optional<Real> truncation_tail_bound;
  std::map<std::string, Real> residuals;
  std::map<std::string, Real> context;  // truncation sizes, dimensions, ...
};

}  // namespace nuctrace
