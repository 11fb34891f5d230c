// Acceptance suite: runs every verification criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 only if all pass.

#include <cstring>
#include <iostream>

#include "ecplab/verify.hpp"

int main(int argc, char** argv) {
  using namespace ecplab::verify;
  Profile profile = Profile::full;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) profile = Profile::quick;

  std::cout << "acceptance suite (" << (profile == Profile::full ? "full" : "quick")
            << " profile)\n";
  const auto results = run_all(profile);
  for (const auto& r : results) std::cout << format_line(r) << "\n";
  const int rc = exit_code(results);
  std::cout << (rc == 0 ? "all criteria passed\n" : "some criteria failed\n");
  return rc;
}
