#pragma once

#include <string>
#include <vector>

namespace wk {

struct CheckLine {
  std::string name;
  long cases = 0;
  long failures = 0;
  std::string firstFailure;
  bool ok() const { return failures == 0 && cases > 0; }
};

struct SuiteReport {
  std::string suite;
  int criterion = 0;
  unsigned long seed = 0;
  int cases = 0;
  std::vector<CheckLine> checks;
  std::vector<std::string> notes;  // informational counts, never affect the verdict
  bool passed() const;
  std::string str() const;
};

struct SuiteInfo {
  std::string name;
  int criterion;
  int defaultCases;
  std::string summary;
};

// One suite per acceptance criterion 1..9, in criterion order.
const std::vector<SuiteInfo>& verifySuites();
// cases <= 0 means the suite default. Throws InvalidArgument for an unknown name.
SuiteReport runSuite(const std::string& name, unsigned long seed, int cases = 0);

}  // namespace wk
