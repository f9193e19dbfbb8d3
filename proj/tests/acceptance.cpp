// Acceptance run: one line per criterion, nonzero exit on any failure.
// Usage: sftlab_acceptance [--only LIST] [--seed N]

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sftlab/sftlab.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string only = "all";
  std::uint64_t seed = sftlab::kDefaultSeed;
  app.add_option("--only", only, "criterion ids or group names");
  app.add_option("--seed", seed, "root seed");
  CLI11_PARSE(app, argc, argv);

  sftlab::VerifyOptions opt;
  opt.seed = seed;
  opt.timing = true;
  try {
    opt.only = sftlab::parse_only(only);
  } catch (const sftlab::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  const auto res = sftlab::run_verify(opt);
  for (const auto& oc : res.criteria) {
    const bool ok = oc.passed && oc.within_budget();
    std::printf("acceptance %2d %s  %s  (%.2f s, budget %.0f s)\n", oc.id, ok ? "PASS" : "FAIL", oc.title.c_str(),
                oc.seconds, oc.budget);
    for (const auto& a : res.report.assertions)
      if (a.group == std::to_string(oc.id) && !a.passed)
        std::printf("    failed: %s  observed=%s expected %s\n", a.name.c_str(), a.observed.dump().c_str(),
                    a.expected.c_str());
  }
  return res.passed() ? 0 : 1;
}
