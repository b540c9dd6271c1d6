#include "grenn/io/csv.hpp"

namespace grenn::io {

std::string write_trace_csv(const model::TrainingTrace& trace) {
  std::string out = "cycle,global_error,delta\n";
  for (const auto& c : trace.cycles)
    out += std::to_string(c.cycle) + "," + format_real(c.global_error) + "," +
           format_real(c.delta) + "\n";
  return out;
}

}  // namespace grenn::io
