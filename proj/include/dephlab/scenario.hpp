#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dephlab/config.hpp"

namespace dephlab {

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 2 partial failures
  std::vector<std::string> written;
  std::vector<std::string> failures;
};

RunOutcome run_scenario(const Scenario& sc, std::ostream& log);
RunOutcome run_sweep(const Scenario& sc, const std::string& axis,
                     std::ostream& log);

}  // namespace dephlab
