// Replacement global allocation functions that keep per-thread live and peak
// byte counts. Each block carries a header holding its requested size.

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <new>

#include "tol/bench.hpp"

namespace {

thread_local std::int64_t t_live = 0;
thread_local std::int64_t t_peak = 0;

constexpr std::size_t kHeader = alignof(std::max_align_t);

void* counted_alloc(std::size_t n) {
  void* base = std::malloc(n + kHeader);
  if (!base) return nullptr;
  *static_cast<std::size_t*>(base) = n;
  t_live += static_cast<std::int64_t>(n);
  if (t_live > t_peak) t_peak = t_live;
  return static_cast<char*>(base) + kHeader;
}

void counted_free(void* p) noexcept {
  if (!p) return;
  void* base = static_cast<char*>(p) - kHeader;
  t_live -= static_cast<std::int64_t>(*static_cast<std::size_t*>(base));
  std::free(base);
}

void* alloc_or_throw(std::size_t n) {
  if (void* p = counted_alloc(n)) return p;
  throw std::bad_alloc();
}

}  // namespace

void* operator new(std::size_t n) { return alloc_or_throw(n); }
void* operator new[](std::size_t n) { return alloc_or_throw(n); }
void* operator new(std::size_t n, const std::nothrow_t&) noexcept { return counted_alloc(n); }
void* operator new[](std::size_t n, const std::nothrow_t&) noexcept { return counted_alloc(n); }
void operator delete(void* p) noexcept { counted_free(p); }
void operator delete[](void* p) noexcept { counted_free(p); }
void operator delete(void* p, std::size_t) noexcept { counted_free(p); }
void operator delete[](void* p, std::size_t) noexcept { counted_free(p); }
void operator delete(void* p, const std::nothrow_t&) noexcept { counted_free(p); }
void operator delete[](void* p, const std::nothrow_t&) noexcept { counted_free(p); }

namespace tol::memory {

std::int64_t live_bytes() { return t_live; }
std::int64_t peak_bytes() { return t_peak; }
void reset_peak() { t_peak = t_live; }

}  // namespace tol::memory
