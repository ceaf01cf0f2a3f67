#ifndef GMSD_BUFFER_HPP
#define GMSD_BUFFER_HPP

#include <atomic>
#include <cstddef>
#include <vector>

namespace gmsd {

// Accounting for the sample buffers the kernel allocates, so the linear
// memory claim (peak auxiliary storage <= K * N samples) can be asserted
// rather than just stated. Counters are global; the pipelines themselves
// only allocate a handful of buffers so the overhead is unmeasurable.
namespace alloc_stats {

namespace detail {
inline std::atomic<long long> current{0};
inline std::atomic<long long> peak{0};

inline void add(long long n) {
    long long cur = current.fetch_add(n) + n;
    long long prev = peak.load();
    while (cur > prev && !peak.compare_exchange_weak(prev, cur)) {
    }
}

inline void sub(long long n) { current.fetch_sub(n); }
} // namespace detail

// Live tracked samples right now / high-water mark since the last reset.
inline long long current_samples() { return detail::current.load(); }
inline long long peak_samples() { return detail::peak.load(); }
inline void reset_peak() { detail::peak.store(detail::current.load()); }

} // namespace alloc_stats

template <class T>
struct TrackingAllocator {
    using value_type = T;

    TrackingAllocator() = default;
    template <class U>
    TrackingAllocator(const TrackingAllocator<U> &) noexcept {}

    T *allocate(std::size_t n) {
        alloc_stats::detail::add(static_cast<long long>(n));
        return std::allocator<T>{}.allocate(n);
    }
    void deallocate(T *p, std::size_t n) noexcept {
        alloc_stats::detail::sub(static_cast<long long>(n));
        std::allocator<T>{}.deallocate(p, n);
    }

    friend bool operator==(const TrackingAllocator &, const TrackingAllocator &) { return true; }
};

// Row-major sample storage used by images and per-pixel maps.
using SampleBuffer = std::vector<double, TrackingAllocator<double>>;

} // namespace gmsd

#endif
