#include "ecplab/errors.hpp"

namespace ecplab {

const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::out_of_range_t: return "OutOfRangeT";
    case errc::no_bracketed_root: return "NoBracketedRoot";
    case errc::too_few_samples: return "TooFewSamples";
    case errc::sandwich_violated: return "SandwichViolated";
    case errc::degenerate_triangle: return "DegenerateTriangle";
    case errc::point_outside: return "PointOutside";
    case errc::solver_stagnation: return "SolverStagnation";
    case errc::no_group_tables: return "NoGroupTables";
    case errc::window_not_found: return "WindowNotFound";
    case errc::unknown_figure: return "UnknownFigure";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

Error::Error(errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ecplab
