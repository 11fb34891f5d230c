#pragma once

// One-shot verification suite behind `ecplab verify` and the acceptance test
// binary: nine numbered checks covering the spectral oracles, the symmetry
// degeneracy, the three-nodal-domain windows, the geometry certificates, the
// closed-form identities, the Courant / Gladwell-Zhu bounds, the deformation
// continuity run and the Polya inequality.

#include <string>
#include <vector>

namespace ecplab::verify {

enum class Profile { quick, full };

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

std::vector<CheckResult> run_all(Profile profile);

// 0 when all checks pass, 1 otherwise
int exit_code(const std::vector<CheckResult>& results);

std::string format_line(const CheckResult& r);

}  // namespace ecplab::verify
