#pragma once

#include <cstddef>
#include <functional>

namespace mahler {

/// Worker count: MAHLER_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for every i in [0, count). Work is handed out by index, so
/// callers that write only to slot i get results independent of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mahler
