#pragma once

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace mzak {

/// Keeps large field-sized blocks on the heap between steps instead of returning
/// them to the kernel after every free. Call once at program start.
inline void tune_allocator() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
}

}  // namespace mzak
