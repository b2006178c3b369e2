#pragma once

#include <set>
#include <string>
#include <utility>

namespace tamp::world {

// Symmetric relation over body identifiers; allowed pairs are exempt from
// collision and distance reporting.
class AllowedCollisionMatrix {
public:
  void allow(const std::string& a, const std::string& b) {
    allowed_.insert(normalized(a, b));
  }

  bool is_allowed(const std::string& a, const std::string& b) const {
    return a == b || allowed_.count(normalized(a, b)) > 0;
  }

  std::size_t size() const { return allowed_.size(); }

private:
  static std::pair<std::string, std::string> normalized(const std::string& a,
                                                        const std::string& b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  std::set<std::pair<std::string, std::string>> allowed_;
};

}  // namespace tamp::world
