#include "doilab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace doilab::parallel {

std::size_t thread_count() {
  if (const char* env = std::getenv("DOILAB_THREADS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace doilab::parallel
