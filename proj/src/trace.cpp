#include <charconv>
#include <ostream>

#include "gaugeopt/solvers.hpp"

namespace gaugeopt {

// Shortest decimal that round-trips to the same double.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << "iter,time_s,objective,half_sq_objective,best_so_far,feasible\n";
  for (const TraceRow& r : trace.rows) {
    out << r.iter << ',' << format_double(r.time_s) << ',' << format_double(r.objective) << ','
        << format_double(r.half_sq_objective) << ',' << format_double(r.best_so_far) << ','
        << (r.feasible ? 1 : 0) << '\n';
  }
}

}  // namespace gaugeopt
