#include "cminhash/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cmh {

unsigned resolve_threads(unsigned requested) noexcept {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CMH_THREADS")) {
        try {
            const long value = std::stol(env);
            if (value > 0) return static_cast<unsigned>(value);
        } catch (...) {
        }
    }
    return 1;
}

}  // namespace cmh
