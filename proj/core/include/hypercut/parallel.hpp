#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace hypercut {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::generate_canonical<double, 64>(rng); }

// Walkers are grouped in fixed blocks; block b of stream `tag` under `seed` draws from
// mt19937_64 seeded with seed_seq{lo32(seed), hi32(seed), tag, b}. Results therefore do
// not depend on how blocks are distributed over threads.
constexpr std::size_t block_size = 4096;

Rng block_rng(std::uint64_t seed, std::uint32_t tag, std::uint64_t block);

// Worker count: explicit request if positive, else HYPERCUT_WORKERS, else hardware concurrency.
unsigned resolve_workers(int requested = 0);

// Calls fn(block, begin, end) for every block of [0, n). Blocks are claimed from a shared
// counter by `workers` threads; the first exception thrown is rethrown on the caller.
void for_each_block(std::size_t n, std::size_t block, unsigned workers,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

std::size_t block_count(std::size_t n, std::size_t block = block_size);

} // namespace hypercut
