#pragma once

#include <stdexcept>
#include <string>

namespace ecplab {

enum class errc {
  invalid_argument,
  out_of_range_t,
  no_bracketed_root,
  too_few_samples,
  sandwich_violated,
  degenerate_triangle,
  point_outside,
  solver_stagnation,
  no_group_tables,
  window_not_found,
  unknown_figure,
  io_error,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what);
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] void fail(errc code, const std::string& what);

}  // namespace ecplab
