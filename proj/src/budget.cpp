#include "hognn/budget.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace hognn::budget {

int vertex_cap(int default_cap) {
  const char* raw = std::getenv("HOGNN_BUDGET_OVERRIDE");
  if (raw == nullptr || *raw == '\0') return default_cap;
  try {
    return std::max(default_cap, std::stoi(raw));
  } catch (const std::exception&) {
    return default_cap;
  }
}

} // namespace hognn::budget
