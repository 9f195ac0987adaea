#pragma once

#include <string>
#include <vector>

namespace twocat {

struct Finding {
  std::string code;      // e.g. "vcomp.assoc", "om1"
  std::string location;  // where the failure was observed
  std::string message;
  std::vector<std::string> witnesses;
};

// Ordered list of findings. Order follows the order in which checks run,
// which is deterministic for a given input.
struct Report {
  std::vector<Finding> findings;
  std::size_t total = 0;       // findings seen, including dropped ones
  std::size_t max_kept = 200;

  bool ok() const { return total == 0; }

  void add(std::string code, std::string location, std::string message,
           std::vector<std::string> witnesses = {}) {
    ++total;
    if (findings.size() < max_kept) {
      findings.push_back({std::move(code), std::move(location), std::move(message), std::move(witnesses)});
    }
  }

  void merge(const Report& other, const std::string& prefix = "") {
    for (const auto& f : other.findings) {
      if (findings.size() >= max_kept) break;
      findings.push_back({prefix + f.code, f.location, f.message, f.witnesses});
    }
    total += other.total;
  }

  bool has(const std::string& code) const {
    for (const auto& f : findings)
      if (f.code == code) return true;
    return false;
  }

  bool has_prefix(const std::string& p) const {
    for (const auto& f : findings)
      if (f.code.compare(0, p.size(), p) == 0) return true;
    return false;
  }
};

}  // namespace twocat
