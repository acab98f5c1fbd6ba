#include <cstdio>
#include <cstdlib>

#include "alab/acceptance.hpp"
#include "alab/cli.hpp"

int main() {
  int failed = 0;
  for (int id = 1; id <= alab::kCriterionCount; ++id) {
    const alab::CriterionResult r = alab::run_criterion(id, alab::resolve_threads(0));
    std::printf("%s\n", alab::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d of %d acceptance criteria passed\n", alab::kCriterionCount - failed,
              alab::kCriterionCount);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
