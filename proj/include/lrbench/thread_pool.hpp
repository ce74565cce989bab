#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lrbench {

// Fixed-size worker pool used by the kernels. Work is handed out as contiguous
// index chunks, one per worker at most, and for_chunks blocks until every
// chunk has run. With a single thread (or a single chunk) the body runs inline
// on the calling thread.
class ThreadPool {
public:
    // threads == 0 picks std::thread::hardware_concurrency().
    explicit ThreadPool(unsigned threads = 0);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    unsigned thread_count() const { return thread_count_; }

    // Splits [begin, end) into at most thread_count() contiguous chunks and
    // runs body(chunk_begin, chunk_end) for each. The first exception thrown
    // by any chunk is rethrown on the caller after all chunks finish.
    void for_chunks(std::size_t begin, std::size_t end,
                    const std::function<void(std::size_t, std::size_t)>& body);

private:
    void worker_loop();

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<std::function<void()>> tasks_;
    bool stop_ = false;
    unsigned thread_count_ = 1;
};

}  // namespace lrbench
