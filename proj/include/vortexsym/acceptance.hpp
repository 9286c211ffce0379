#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vortexsym/config.hpp"

namespace vortexsym {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;   // measured values backing the verdict
  double seconds = 0.0;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
};

// Runs the ten-criterion verification suite at desk scale (canonical
// profile, default grids).  Progress and measured values go to `log`; the
// returned report holds one entry per criterion.  The config supplies the
// eps ladder, fit window, and worker count; grid/mode settings of the
// criteria themselves are fixed by the suite.
AcceptanceReport run_acceptance(std::ostream& log, const RunConfig& cfg);

// Prints "PASS/FAIL [ n] name -- detail (t s)" lines plus a summary row.
void print_report(std::ostream& os, const AcceptanceReport& report);

}  // namespace vortexsym
