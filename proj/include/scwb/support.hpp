// support.hpp — arena allocation and a small work-sharing helper.
#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <new>
#include <thread>
#include <vector>

namespace scwb {

// Bump allocator for evaluator-internal objects. Objects must be trivially
// destructible; everything is released at once by reset().
class Arena {
public:
    explicit Arena(std::size_t chunk_bytes = 1 << 16) : chunk_bytes_(chunk_bytes) {}

    template <typename T, typename... Args>
    T* make(Args&&... args) {
        static_assert(std::is_trivially_destructible_v<T>);
        void* p = allocate(sizeof(T), alignof(T));
        return new (p) T{std::forward<Args>(args)...};
    }

    void* allocate(std::size_t size, std::size_t align) {
        std::size_t off = (used_ + align - 1) & ~(align - 1);
        if (chunks_.empty() || off + size > chunk_bytes_) {
            std::size_t cap = size > chunk_bytes_ ? size : chunk_bytes_;
            chunks_.push_back(std::make_unique<std::byte[]>(cap));
            cur_ = chunks_.back().get();
            used_ = 0;
            off = 0;
        }
        used_ = off + size;
        return cur_ + off;
    }

    void reset() {
        if (chunks_.size() > 1) {
            auto first = std::move(chunks_.front());
            chunks_.clear();
            chunks_.push_back(std::move(first));
        }
        cur_ = chunks_.empty() ? nullptr : chunks_.front().get();
        used_ = 0;
    }

private:
    std::size_t chunk_bytes_;
    std::vector<std::unique_ptr<std::byte[]>> chunks_;
    std::byte* cur_ = nullptr;
    std::size_t used_ = 0;
};

inline void hash_combine(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

inline unsigned default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Runs fn(i) for i in [0, n). Results must be written to preallocated,
// per-index storage; the iteration order across workers is unspecified but
// every index runs exactly once.
inline void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned count = workers < n ? workers : static_cast<unsigned>(n);
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

} // namespace scwb
