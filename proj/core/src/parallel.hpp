#pragma once

#include <cstddef>
#include <functional>

namespace steinspc::detail {

/// Resolves 0 to the hardware concurrency (at least 1).
unsigned resolve_workers(unsigned requested) noexcept;

/// Calls body(i) for i in [0, n) on up to `workers` threads. Each index is
/// visited exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t n, unsigned workers, std::function<void(std::size_t)> const& body);

}  // namespace steinspc::detail
