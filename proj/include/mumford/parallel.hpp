#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mumford {

int worker_threads();
void set_worker_threads(int n);

// Runs body(chunk, begin, end) over contiguous chunks of [0, n). Chunk
// boundaries depend only on n and the worker count; callers combine chunk
// results with exact operations, so output does not depend on scheduling.
void parallel_chunks(std::size_t n, std::size_t min_chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

// Evaluates tasks concurrently, rethrowing the first failure by task order.
void parallel_invoke(const std::vector<std::function<void()>>& tasks);

}  // namespace mumford
