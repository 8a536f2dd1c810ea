#include "prk/trace_io.hpp"

#include "prk/json_format.hpp"

namespace prk {

std::string trace_to_csv(const ConvergenceTrace& trace) {
  std::string out = "step,dist,angle,residual\n";
  for (const TraceRecord& r : trace.records) {
    out += std::to_string(r.step);
    for (double value : {r.dist, r.angle, r.residual}) {
      out += ',';
      out += format_double(value);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json trace_metadata(const ConvergenceTrace& trace) {
  return {{"seed", trace.config.seed},         {"stream", trace.config.stream},
          {"K", trace.config.iterations},      {"n", trace.config.n},
          {"m", trace.config.m},               {"selector", trace.config.selector}};
}

}  // namespace prk
