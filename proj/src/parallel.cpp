#include "mumford/parallel.hpp"

#include <atomic>

namespace mumford {

namespace {
std::atomic<int> g_threads{1};
thread_local bool t_inside_worker = false;
}  // namespace

int worker_threads() { return g_threads.load(); }

void set_worker_threads(int n) { g_threads.store(std::max(1, n)); }

void parallel_chunks(std::size_t n, std::size_t min_chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    const std::size_t workers = static_cast<std::size_t>(worker_threads());
    std::size_t chunks = std::min(workers, std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
    if (t_inside_worker) chunks = 1;
    if (chunks <= 1) {
        body(0, 0, n);
        return;
    }
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> pool;
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
        pool.emplace_back([&, c, lo, hi] {
            t_inside_worker = true;
            try {
                body(c, lo, hi);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void parallel_invoke(const std::vector<std::function<void()>>& tasks) {
    parallel_chunks(tasks.size(), 1, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) tasks[k]();
    });
}

}  // namespace mumford
