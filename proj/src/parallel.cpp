#include "impq/parallel.hpp"

#include <cstdlib>
#include <string>

namespace impq {

std::size_t worker_count() {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("IMPQ_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap > 0 && static_cast<std::size_t>(cap) < n) n = static_cast<std::size_t>(cap);
        } catch (const std::exception&) {
            // unparsable cap is ignored
        }
    }
    return n;
}

}  // namespace impq
