#include "hypercut/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hypercut {

Rng block_rng(std::uint64_t seed, std::uint32_t tag, std::uint64_t block) {
    std::seed_seq seq{std::uint32_t(seed & 0xffffffffu), std::uint32_t(seed >> 32), tag,
                      std::uint32_t(block & 0xffffffffu), std::uint32_t(block >> 32)};
    return Rng(seq);
}

unsigned resolve_workers(int requested) {
    if (requested > 0) return unsigned(requested);
    if (const char* env = std::getenv("HYPERCUT_WORKERS")) {
        try {
            int v = std::stoi(env);
            if (v > 0) return unsigned(v);
        } catch (...) {
        }
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

std::size_t block_count(std::size_t n, std::size_t block) { return (n + block - 1) / block; }

void for_each_block(std::size_t n, std::size_t block, unsigned workers,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    std::size_t nb = block_count(n, block);
    if (nb == 0) return;
    workers = std::max(1u, std::min<unsigned>(workers, unsigned(nb)));
    if (workers == 1) {
        for (std::size_t b = 0; b < nb; ++b) fn(b, b * block, std::min(n, (b + 1) * block));
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto work = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= nb) return;
            try {
                fn(b, b * block, std::min(n, (b + 1) * block));
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
                next.store(nb);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

} // namespace hypercut
