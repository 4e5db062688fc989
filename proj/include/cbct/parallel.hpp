#pragma once

#include <cstddef>
#include <functional>

namespace cbct {

/// Number of worker threads used by parallel loops.  Defaults to the
/// CBCT_THREADS environment variable if set and positive, otherwise to
/// the hardware concurrency.  Thread count never changes results: all
/// parallel reductions in this library merge partial results in a fixed
/// order, so outputs are byte-identical for any setting.
int thread_count();

/// Override the thread count for this process (values < 1 reset to the
/// default resolution order).
void set_thread_count(int n);

/// Runs fn(i) for i in [begin, end) across the configured worker threads.
/// Iterations must write to disjoint locations; there is no implicit
/// reduction.  Exceptions thrown by fn are rethrown on the calling thread.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

/// Deterministic parallel reduction over items [0, n).  Each worker fills a
/// private accumulator of type double via partial(i, acc); the per-chunk
/// accumulators are then summed sequentially in ascending chunk order, so
/// the result is identical for any thread count.  Chunk size is fixed
/// (independent of the thread count) to keep the summation tree stable.
double deterministic_sum(std::size_t n,
                         const std::function<double(std::size_t)>& term);

/// Runs produce(v) for each view v in [0, nviews), possibly in parallel,
/// then calls consume(v) for v = 0, 1, ... strictly in ascending order.
/// produce typically fills a per-view buffer and consume merges it into a
/// shared output; ordering the merge makes accumulation deterministic.
void ordered_parallel_views(std::size_t nviews,
                            const std::function<void(std::size_t)>& produce,
                            const std::function<void(std::size_t)>& consume);

} // namespace cbct
