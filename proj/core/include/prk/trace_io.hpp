#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "prk/solver.hpp"

namespace prk {

/// `step,dist,angle,residual`, one row per record, 17 significant digits.
std::string trace_to_csv(const ConvergenceTrace& trace);

/// Sidecar metadata {seed, stream, K, n, m, selector}.
nlohmann::json trace_metadata(const ConvergenceTrace& trace);

}  // namespace prk
