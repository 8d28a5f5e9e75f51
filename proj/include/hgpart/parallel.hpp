// parallel.hpp - minimal bulk-synchronous parallel_for over a persistent pool
//
// Every parallel loop in hgpart writes disjoint output slots and performs its
// reductions afterwards in index order, so results never depend on the number
// of threads or on scheduling.
#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace hgpart::par {

class ThreadPool {
public:
    explicit ThreadPool(unsigned threads) : threads_(std::max(1u, threads)) {
        for (unsigned i = 1; i < threads_; ++i) workers_.emplace_back([this] { worker_loop(); });
    }

    ~ThreadPool() {
        {
            std::lock_guard lock(mutex_);
            stop_ = true;
        }
        wake_.notify_all();
        for (auto& w : workers_) w.join();
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    unsigned size() const { return threads_; }

    // Runs body(lo, hi) over `chunks` equal slices of [0, n). Blocks until done.
    void run(std::size_t n, std::size_t chunks, const std::function<void(std::size_t, std::size_t)>& body) {
        auto job = std::make_shared<Job>();
        job->body = &body;
        job->n = n;
        job->chunks = chunks;
        job->pending = chunks;
        {
            std::lock_guard lock(mutex_);
            job_ = job;
            ++generation_;
        }
        wake_.notify_all();

        drain(*job);

        std::unique_lock lock(mutex_);
        done_.wait(lock, [&] { return job->pending == 0; });
        job_.reset();
    }

    static bool& in_pool() {
        thread_local bool flag = false;
        return flag;
    }

private:
    struct Job {
        const std::function<void(std::size_t, std::size_t)>* body = nullptr;
        std::size_t n = 0;
        std::size_t chunks = 0;
        std::atomic<std::size_t> next{0};
        std::size_t pending = 0;  // guarded by mutex_
    };

    void drain(Job& job) {
        in_pool() = true;
        std::size_t finished = 0;
        for (;;) {
            std::size_t c = job.next.fetch_add(1);
            if (c >= job.chunks) break;
            (*job.body)(job.n * c / job.chunks, job.n * (c + 1) / job.chunks);
            ++finished;
        }
        in_pool() = false;
        if (finished > 0) {
            std::lock_guard lock(mutex_);
            job.pending -= finished;
            if (job.pending == 0) done_.notify_all();
        }
    }

    void worker_loop() {
        std::uint64_t seen = 0;
        for (;;) {
            std::shared_ptr<Job> job;
            {
                std::unique_lock lock(mutex_);
                wake_.wait(lock, [&] { return stop_ || (generation_ != seen && job_ != nullptr); });
                if (stop_) return;
                seen = generation_;
                job = job_;
            }
            drain(*job);
        }
    }

    unsigned threads_;
    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    bool stop_ = false;
    std::uint64_t generation_ = 0;
    std::shared_ptr<Job> job_;
};

namespace detail {
inline std::unique_ptr<ThreadPool>& pool_slot() {
    static std::unique_ptr<ThreadPool> pool;
    return pool;
}
inline std::mutex& pool_mutex() {
    static std::mutex m;
    return m;
}
inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }
} // namespace detail

inline void set_num_threads(unsigned threads) {
    std::lock_guard lock(detail::pool_mutex());
    auto& slot = detail::pool_slot();
    threads = threads == 0 ? detail::default_threads() : threads;
    if (!slot || slot->size() != threads) {
        slot.reset();
        slot = std::make_unique<ThreadPool>(threads);
    }
}

inline ThreadPool& pool() {
    auto& slot = detail::pool_slot();
    if (!slot) set_num_threads(0);
    return *slot;
}

inline unsigned num_threads() { return pool().size(); }

// Calls f(i) for every i in [0, n). f must only write state owned by index i.
template <class F>
void parallel_for(std::size_t n, F&& f, std::size_t grain = 2048) {
    if (n == 0) return;
    ThreadPool& p = pool();
    if (p.size() == 1 || n <= grain || ThreadPool::in_pool()) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::size_t chunks = std::min<std::size_t>((n + grain - 1) / grain, std::size_t{p.size()} * 8);
    std::function<void(std::size_t, std::size_t)> body = [&f](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) f(i);
    };
    p.run(n, chunks, body);
}

// Calls body(lo, hi) over disjoint slices covering [0, n); lets a slice own scratch buffers.
template <class F>
void parallel_for_range(std::size_t n, F&& body, std::size_t grain = 2048) {
    if (n == 0) return;
    ThreadPool& p = pool();
    if (p.size() == 1 || n <= grain || ThreadPool::in_pool()) {
        body(std::size_t{0}, n);
        return;
    }
    std::size_t chunks = std::min<std::size_t>((n + grain - 1) / grain, std::size_t{p.size()} * 8);
    std::function<void(std::size_t, std::size_t)> fn = [&body](std::size_t lo, std::size_t hi) { body(lo, hi); };
    p.run(n, chunks, fn);
}

// Exclusive prefix sum, sequential. Returns the total; out has size in.size() + 1.
template <class T>
T exclusive_scan(const std::vector<T>& in, std::vector<T>& out) {
    out.resize(in.size() + 1);
    T acc{};
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = acc;
        acc += in[i];
    }
    out[in.size()] = acc;
    return acc;
}

} // namespace hgpart::par
