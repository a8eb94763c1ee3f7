#pragma once

#include <algorithm>
#include <chrono>
#include <thread>

namespace cutoffprobe {

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds base_delay{100};
    std::chrono::milliseconds max_delay{2000};

    std::chrono::milliseconds delay_before(int attempt) const {
        // attempt is 1-based; no delay before the first try
        if (attempt <= 1) return std::chrono::milliseconds{0};
        auto d = base_delay;
        for (int i = 2; i < attempt && d < max_delay; ++i) d *= 2;
        return std::min(d, max_delay);
    }
};

/// Calls fn() up to policy.attempts times, sleeping with capped exponential backoff between
/// tries. Rethrows the last failure.
template <typename Fn>
auto with_retry(const RetryPolicy& policy, Fn&& fn) -> decltype(fn()) {
    const int attempts = std::max(policy.attempts, 1);
    for (int attempt = 1;; ++attempt) {
        std::this_thread::sleep_for(policy.delay_before(attempt));
        try {
            return fn();
        } catch (...) {
            if (attempt >= attempts) throw;
        }
    }
}

}  // namespace cutoffprobe
