#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steinkit/coupling.hpp"
#include "steinkit/estimators.hpp"
#include "steinkit/replicate.hpp"

namespace steinkit {

/// Finite surrogate for "all admissible f" in the Stein and Palm identities.
enum class TestFunction { one, identity, square, cosine };

/// Parses "1", "w" (or "x"), "w2" (or "x2"), "cos". Throws on anything else.
TestFunction parse_test_function(std::string_view id);
std::string to_string(TestFunction f);

double evaluate(TestFunction f, double x) noexcept;

/// Models whose records embed a coupling provide an `as_coupling` overload
/// found by argument-dependent lookup.
inline const SteinCouplingDraw& as_coupling(const SteinCouplingDraw& d) { return d; }

/// Estimates E{G f(W') - G f(W)} - E{W f(W)}; zero for an exact coupling.
Estimate stein_identity_residual(std::span<const SteinCouplingDraw> draws, TestFunction f);

/// Estimates E{|Xi| f(|Xi|)} - sum_a E f(|Xi_a|) Lambda({a}); zero for a
/// valid Palm coupling. Throws if any panel has an empty carrier.
Estimate palm_identity_residual(std::span<const PalmPanel> panels, TestFunction f);

template <SampleableModel M>
Estimate stein_identity_residual(const M& model, TestFunction f, const ReplicateSpec& spec) {
    const auto draws = run_projected(model, spec, [](const auto& r) { return as_coupling(r); });
    return stein_identity_residual(draws, f);
}

template <SampleableModel M>
Estimate palm_identity_residual(const M& model, TestFunction f, const ReplicateSpec& spec) {
    const auto panels = run_replicates(model, spec);
    return palm_identity_residual(panels, f);
}

}  // namespace steinkit
