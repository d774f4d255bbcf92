#pragma once

#include <string>
#include <vector>

namespace klein {

struct Violation {
  std::string rule;    // which axiom or property failed
  std::string detail;  // witness: basis elements involved and the unequal values
};

struct Report {
  bool pass = true;
  std::vector<Violation> violations;

  void fail(std::string rule, std::string detail) {
    pass = false;
    violations.push_back({std::move(rule), std::move(detail)});
  }
  void merge(const Report& other) {
    if (!other.pass) pass = false;
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
};

}  // namespace klein
