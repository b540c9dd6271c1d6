#pragma once

#include <string>

#include "grenn/model/drivers.hpp"

namespace grenn::io {

/// Render per-cycle training metrics as CSV: header `cycle,global_error,delta`
/// then one row per cycle, reals in shortest round-trip form.
std::string write_trace_csv(const model::TrainingTrace& trace);

}  // namespace grenn::io
