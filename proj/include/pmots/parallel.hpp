#pragma once

#include <omp.h>

namespace pmots {

/// Thread count for an OpenMP region; 0 means the OpenMP default.
inline int resolve_threads(int requested) {
    return requested > 0 ? requested : omp_get_max_threads();
}

}  // namespace pmots
