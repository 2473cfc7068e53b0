#include "semiembed/report.hpp"

#include <algorithm>

namespace semiembed {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Embeddable: return "EMBEDDABLE";
    case Verdict::NotEmbeddable: return "NOT_EMBEDDABLE";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "?";
}

const Condition* DecisionReport::find(const std::string& name) const {
  auto it = std::find_if(conditions.begin(), conditions.end(), [&](const Condition& c) { return c.name == name; });
  return it == conditions.end() ? nullptr : &*it;
}

std::vector<Condition> DecisionReport::violations() const {
  std::vector<Condition> out;
  std::copy_if(conditions.begin(), conditions.end(), std::back_inserter(out),
               [](const Condition& c) { return c.applicable && !c.satisfied; });
  return out;
}

bool DecisionReport::violated(const std::string& name) const {
  const Condition* c = find(name);
  return c != nullptr && c->applicable && !c->satisfied;
}

}  // namespace semiembed
