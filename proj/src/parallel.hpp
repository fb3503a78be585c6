// Copyright 2026 The retrobell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace retrobell::detail {

struct Chunk {
    std::uint64_t begin;
    std::uint64_t end;
};

/// Splits [0, total) into `parts` contiguous chunks; the first total % parts
/// chunks are one longer.
inline std::vector<Chunk> partition(std::uint64_t total, unsigned parts) {
    std::vector<Chunk> chunks;
    chunks.reserve(parts);
    const std::uint64_t base = total / parts;
    const std::uint64_t extra = total % parts;
    std::uint64_t begin = 0;
    for (unsigned w = 0; w < parts; ++w) {
        const std::uint64_t len = base + (w < extra ? 1 : 0);
        chunks.push_back({begin, begin + len});
        begin += len;
    }
    return chunks;
}

/// Runs fn(worker, chunk) for each chunk, inline when there is one worker.
/// The first exception thrown by any worker is rethrown.
template <typename Fn>
void run_workers(std::uint64_t total, unsigned workers, Fn&& fn) {
    if (workers == 0) {
        throw std::invalid_argument("worker count must be at least 1");
    }
    const auto chunks = partition(total, workers);
    if (workers == 1) {
        fn(0u, chunks[0]);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                try {
                    fn(w, chunks[w]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace retrobell::detail
