// Runs the acceptance battery and prints one line per criterion. Exit code
// is the number of failing criteria (capped at 1 for ctest).

#include <cstdio>
#include <cstdlib>
#include <string>

#include "bergman/acceptance.hpp"
#include "bergman/parallel.hpp"

int main(int argc, char** argv) {
  bergman::parallel::apply_thread_cap_from_env();
  bergman::acceptance::Options opts;
  for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& r : bergman::acceptance::run_all(opts)) {
    std::printf("%s\n", bergman::acceptance::summary_line(r).c_str());
    std::fflush(stdout);
    if (!r.pass()) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
