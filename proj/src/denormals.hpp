#pragma once

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace tbec::detail {

// Far tails of a localized packet decay toward the subnormal range, where
// x86 arithmetic is two orders of magnitude slower. Flushes subnormals to zero
// on the calling thread for the guard's lifetime.
class FlushDenormals {
 public:
#if defined(__SSE2__)
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushDenormals() { _mm_setcsr(saved_); }
#else
  FlushDenormals() = default;
#endif
  FlushDenormals(const FlushDenormals&) = delete;
  FlushDenormals& operator=(const FlushDenormals&) = delete;

 private:
#if defined(__SSE2__)
  unsigned saved_;
#endif
};

}  // namespace tbec::detail
