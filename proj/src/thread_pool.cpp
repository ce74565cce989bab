#include "lrbench/thread_pool.hpp"

#include <atomic>
#include <exception>

namespace lrbench {

ThreadPool::ThreadPool(unsigned threads) {
    unsigned n = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    thread_count_ = n;
    if (n > 1) {
        workers_.reserve(n);
        for (unsigned t = 0; t < n; ++t) {
            workers_.emplace_back([this] { worker_loop(); });
        }
    }
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        stop_ = true;
    }
    cv_.notify_all();
    for (std::thread& w : workers_) {
        if (w.joinable()) w.join();
    }
}

void ThreadPool::worker_loop() {
    for (;;) {
        std::function<void()> task;
        {
            std::unique_lock<std::mutex> lock(mutex_);
            cv_.wait(lock, [this] { return stop_ || !tasks_.empty(); });
            if (tasks_.empty()) return;  // stop requested and queue drained
            task = std::move(tasks_.front());
            tasks_.pop_front();
        }
        task();
    }
}

void ThreadPool::for_chunks(std::size_t begin, std::size_t end,
                            const std::function<void(std::size_t, std::size_t)>& body) {
    if (end <= begin) return;
    const std::size_t range = end - begin;
    const std::size_t nchunks = std::min<std::size_t>(thread_count_, range);
    if (workers_.empty() || nchunks <= 1) {
        body(begin, end);
        return;
    }

    std::atomic<std::size_t> remaining{nchunks};
    std::exception_ptr error;
    std::mutex done_mutex;
    std::condition_variable done_cv;

    const std::size_t base = range / nchunks;
    const std::size_t extra = range % nchunks;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        std::size_t lo = begin;
        for (std::size_t c = 0; c < nchunks; ++c) {
            const std::size_t hi = lo + base + (c < extra ? 1 : 0);
            tasks_.push_back([&, lo, hi] {
                try {
                    body(lo, hi);
                } catch (...) {
                    std::lock_guard<std::mutex> done_lock(done_mutex);
                    if (!error) error = std::current_exception();
                }
                if (remaining.fetch_sub(1) == 1) {
                    std::lock_guard<std::mutex> done_lock(done_mutex);
                    done_cv.notify_one();
                }
            });
            lo = hi;
        }
    }
    cv_.notify_all();

    std::unique_lock<std::mutex> done_lock(done_mutex);
    done_cv.wait(done_lock, [&] { return remaining.load() == 0; });
    if (error) std::rethrow_exception(error);
}

}  // namespace lrbench
