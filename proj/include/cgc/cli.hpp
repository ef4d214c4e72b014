#pragma once

// Command-line surface. run() is callable in-process so the test suite can
// drive every subcommand without spawning the binary.

#include <iosfwd>
#include <string>
#include <vector>

#include "cgc/report.hpp"

namespace cgc {

// One parsed invocation. String fields hold canonical texts once a handler
// has accepted them, so the echoed input in a report round-trips.
struct CommandSpec {
  std::string subcommand;
  std::vector<std::string> groups;   // descriptor texts (positional or --group)
  std::string pair;                  // "ambient|sub"
  std::string to_pair;               // transfer target pair
  std::string metric;                // word | dyadic | prufer | chain | pair
  std::vector<std::string> gens;     // word-metric generators
  std::string scales;                // scale rule text, e.g. "1,2,4" or "1,2;+1"
  bool unsafe_scales = false;        // skip the admissibility validation
  std::string schedule;              // odd index schedule, e.g. "3,3"
  std::string grid;                  // delta grid: "1..8" or comma rationals
  std::string s;                     // component/growth scale
  std::string suite;                 // verify suite name
  std::string fixture;               // even-split fixture name
  std::string compare;               // growth candidate: n | n^2 | n^3 | const
  std::string k_list;                // transfer scale checkpoints
  int bound = 8;
  long n_max = 8;
  long depth = 4;
  long h_bound = 4;
  long c_lo = 1;
  long c_hi = 64;
  long start = 1;
  std::vector<std::string> elements; // positional element arguments
  std::string format = "table";     // table | csv | json
  std::string output;                // file path; empty writes to stdout

  Json echo() const;
};

// Exit codes: 0 all checks passed, 1 a violation or refutation was found,
// 2 usage or parse error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cgc
