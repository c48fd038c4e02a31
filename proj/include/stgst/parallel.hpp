#pragma once

#include <cstddef>
#include <functional>

namespace stgst {

// Worker count: STGST_THREADS when set (clamped to >= 1), otherwise the
// hardware concurrency.
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Work items must be independent; results must
// not depend on execution order (callers write to disjoint slots), so
// parallel and serial runs produce identical bytes.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace stgst
