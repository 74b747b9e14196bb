#pragma once
// Deterministic fork-join over an index range. Work is split into contiguous
// chunks, one per worker; each worker writes only into its own slot, so the
// caller's merge order (and therefore the result) is independent of thread
// count and scheduling. Exceptions from workers are rethrown on the caller.

#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace graphbell {

// Runs fn(chunk_index, begin, end) for `chunks` contiguous slices of
// [0, total). chunks == number of workers; a value <= 1 runs inline.
inline void parallel_chunks(std::uint64_t total, int chunks,
                            const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
    if (chunks <= 1 || total == 0) {
        fn(0, 0, total);
        return;
    }
    if (static_cast<std::uint64_t>(chunks) > total) chunks = static_cast<int>(total);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(chunks);
    const std::uint64_t base = total / chunks, extra = total % chunks;
    std::uint64_t begin = 0;
    for (int c = 0; c < chunks; ++c) {
        const std::uint64_t len = base + (static_cast<std::uint64_t>(c) < extra ? 1 : 0);
        const std::uint64_t end = begin + len;
        pool.emplace_back([&, c, begin, end]() {
            try {
                fn(c, begin, end);
            } catch (...) {
                errs[c] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace graphbell
