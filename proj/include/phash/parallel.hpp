#pragma once

#include <functional>

namespace phash {

/// Runs fn(0..n-1) across up to `workers` threads. Work is claimed through a
/// shared atomic index, so results must be written to caller-owned slots keyed
/// by i; output contents are then independent of the worker count. The first
/// exception thrown by any task is rethrown on the calling thread.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace phash
