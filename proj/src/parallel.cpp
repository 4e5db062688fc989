#include "cbct/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cbct {

namespace {

int resolve_default_threads() {
    if (const char* env = std::getenv("CBCT_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc >= 1 ? static_cast<int>(hc) : 1;
}

int g_threads = 0; // 0 = not yet resolved / reset

} // namespace

int thread_count() {
    if (g_threads < 1) g_threads = resolve_default_threads();
    return g_threads;
}

void set_thread_count(int n) { g_threads = n >= 1 ? n : 0; }

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn) {
    if (begin >= end) return;
    const std::size_t n = end - begin;
    const int nthreads = thread_count();
    if (nthreads == 1 || n == 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{begin};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= end) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(end);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t nworkers = std::min<std::size_t>(static_cast<std::size_t>(nthreads), n);
    pool.reserve(nworkers);
    for (std::size_t t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double deterministic_sum(std::size_t n,
                         const std::function<double(std::size_t)>& term) {
    if (n == 0) return 0.0;
    constexpr std::size_t kChunk = 4096;
    const std::size_t nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks, 0.0);
    parallel_for(0, nchunks, [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(lo + kChunk, n);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[c] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

void ordered_parallel_views(std::size_t nviews,
                            const std::function<void(std::size_t)>& produce,
                            const std::function<void(std::size_t)>& consume) {
    if (nviews == 0) return;
    const int nthreads = thread_count();
    if (nthreads == 1 || nviews == 1) {
        for (std::size_t v = 0; v < nviews; ++v) {
            produce(v);
            consume(v);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::size_t merged = 0; // next view whose consume may run
    // Workers may run at most `window` views ahead of the merge frontier,
    // bounding the number of live per-view buffers.
    const std::size_t window = 2 * static_cast<std::size_t>(nthreads);
    std::vector<bool> ready(nviews, false);
    std::mutex m;
    std::condition_variable cv;
    bool failed = false;
    std::exception_ptr error;
    auto worker = [&] {
        for (;;) {
            std::size_t v = next.fetch_add(1);
            if (v >= nviews) return;
            {
                std::unique_lock<std::mutex> lock(m);
                cv.wait(lock, [&] { return failed || v < merged + window; });
                if (failed) return;
            }
            try {
                produce(v);
                std::lock_guard<std::mutex> lock(m);
                ready[v] = true;
                // Merge every consecutive ready view; whichever worker
                // completes the gap view drains the backlog in order.
                while (merged < nviews && ready[merged]) {
                    consume(merged);
                    ++merged;
                }
                cv.notify_all();
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!error) error = std::current_exception();
                failed = true;
                next.store(nviews);
                cv.notify_all();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t nworkers =
        std::min<std::size_t>(static_cast<std::size_t>(nthreads), nviews);
    pool.reserve(nworkers);
    for (std::size_t t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace cbct
