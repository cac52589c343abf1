#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "dlat/acceptance.hpp"

int main(int argc, char** argv) {
  bool verbose = false;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "-v" || a == "--verbose") {
      verbose = true;
      continue;
    }
    char* end = nullptr;
    const long id = std::strtol(a.c_str(), &end, 10);
    if (*end != '\0' || id < 1 || id > dlat::kCriterionCount) {
      std::fprintf(stderr, "usage: acceptance [-v] [criterion ids 1..%d]\n", dlat::kCriterionCount);
      return 2;
    }
    ids.push_back(static_cast<int>(id));
  }
  if (ids.empty())
    for (int id = 1; id <= dlat::kCriterionCount; ++id) ids.push_back(id);
  int failed = 0;
  for (int id : ids) {
    const dlat::CriterionResult r = dlat::run_criterion(id);
    std::printf("%s criterion %2d  %-36s %7.1f s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    if (verbose || !r.pass) std::printf("%s", r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
