#include "epfw/types.hpp"

#include <iostream>

namespace epfw {

void log_warning(const std::string& message) {
  std::cerr << "warning: " << message << "\n";
}

}  // namespace epfw
