// Acceptance suite: one pass/fail line per criterion; exit 0 only when all
// criteria pass.
#include <iostream>

#include "vortexsym/acceptance.hpp"
#include "vortexsym/config.hpp"

int main() {
  vortexsym::RunConfig cfg;  // defaults
  vortexsym::AcceptanceReport rep = vortexsym::run_acceptance(std::cerr, cfg);
  vortexsym::print_report(std::cout, rep);
  return rep.all_pass() ? 0 : 1;
}
