#pragma once

#include <algorithm>
#include <atomic>
#include <concepts>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <vector>

#include "steinkit/error.hpp"
#include "steinkit/rng.hpp"

namespace steinkit {

struct ReplicateSpec {
    std::uint64_t n_reps = 0;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;

    void validate() const {
        if (n_reps == 0) throw std::invalid_argument("n_reps must be positive");
        if (workers == 0) throw std::invalid_argument("workers must be positive");
    }
};

/// Anything with `draw(Rng&) const` returning a default-constructible record.
template <class M>
concept SampleableModel = requires(const M& m, Rng& rng) {
    { m.draw(rng) };
    requires std::is_default_constructible_v<std::remove_cvref_t<decltype(m.draw(rng))>>;
};

template <SampleableModel M>
using record_t = std::remove_cvref_t<decltype(std::declval<const M&>().draw(std::declval<Rng&>()))>;

/// Runs `spec.n_reps` independent replicates of `model`. Replicate i draws
/// from its own stream seeded by stream_seed(master_seed, i) and writes slot
/// i of the result, so the panel is identical for every worker count.
///
/// A throwing draw is rethrown as ReplicateError carrying the smallest
/// failing index.
template <SampleableModel M>
std::vector<record_t<M>> run_replicates(const M& model, const ReplicateSpec& spec) {
    spec.validate();
    std::vector<record_t<M>> out(spec.n_reps);

    std::atomic<std::uint64_t> next{0};
    std::mutex err_mutex;
    std::optional<std::uint64_t> err_index;
    std::string err_what;
    constexpr std::uint64_t kChunk = 64;

    auto work = [&] {
        for (;;) {
            const std::uint64_t begin = next.fetch_add(kChunk, std::memory_order_relaxed);
            if (begin >= spec.n_reps) return;
            const std::uint64_t end = std::min(spec.n_reps, begin + kChunk);
            for (std::uint64_t i = begin; i < end; ++i) {
                try {
                    Rng rng(stream_seed(spec.master_seed, i));
                    out[i] = model.draw(rng);
                } catch (const std::exception& e) {
                    std::lock_guard lock(err_mutex);
                    if (!err_index || i < *err_index) {
                        err_index = i;
                        err_what = e.what();
                    }
                    return;
                }
            }
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(spec.workers, (spec.n_reps + kChunk - 1) / kChunk));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (err_index) throw ReplicateError(*err_index, err_what);
    return out;
}

/// Same as run_replicates, but maps each record through `project` as it is
/// produced; keeps memory flat when only a scalar per replicate is needed.
template <SampleableModel M, class F>
auto run_projected(const M& model, const ReplicateSpec& spec, F project) {
    struct Projected {
        const M& inner;
        F f;
        auto draw(Rng& rng) const { return f(inner.draw(rng)); }
    };
    return run_replicates(Projected{model, std::move(project)}, spec);
}

}  // namespace steinkit
