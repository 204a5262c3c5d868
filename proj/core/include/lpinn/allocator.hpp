#pragma once

namespace lpinn {

/// Keeps freed tape buffers mapped between iterations. Training allocates
/// and releases many same-sized arrays per step; with the default glibc
/// thresholds each one is a fresh mmap and page faults dominate. No-op on
/// other C libraries. Call once at program start.
void keep_freed_memory();

}  // namespace lpinn
