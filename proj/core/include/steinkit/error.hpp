#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace steinkit {

/// A model whose statistic has zero variance (W undefined).
class DegenerateModelError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A failure inside one replicate, tagged with the replicate index.
class ReplicateError : public std::runtime_error {
public:
    ReplicateError(std::uint64_t index, const std::string& what)
        : std::runtime_error("replicate " + std::to_string(index) + ": " + what), index_(index) {}

    std::uint64_t index() const noexcept { return index_; }

private:
    std::uint64_t index_;
};

}  // namespace steinkit
