// SPDX-License-Identifier: Apache-2.0

#include "kob/parallel.hpp"

#include <cstdlib>
#include <string>

namespace kob {

unsigned default_jobs() {
  if (const char *env = std::getenv("KOB_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace kob
