// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.
// --quick shrinks the word lists for a smoke run.

#include <cstring>
#include <iostream>

#include "gallerysheaf/acceptance.hpp"

int main(int argc, char** argv) {
  gallerysheaf::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      opt.quick = true;
    } else {
      std::cerr << "usage: acceptance [--quick]\n";
      return 2;
    }
  }
  gallerysheaf::AcceptanceSuite suite(opt);
  bool ok = true;
  suite.run([&](const gallerysheaf::CriterionResult& r) {
    std::cout << gallerysheaf::format_result(r, true) << std::endl;
    ok = ok && r.ok;
  });
  std::cout << (ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return ok ? 0 : 1;
}
