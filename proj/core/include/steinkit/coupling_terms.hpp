#pragma once

#include <span>

#include "steinkit/bounds.hpp"
#include "steinkit/coupling.hpp"

namespace steinkit {

struct CouplingTermReport {
    CouplingTerms s;               ///< direct Monte Carlo means of s1..s4
    CouplingTerms se;
    double bound = 0.0;            ///< combine_theorem5 of s
    CouplingMomentLedger ledger;   ///< plug-in moment roots and P[A]
    CouplingTerms ledger_bound;    ///< bound_from_moment_ledger(ledger)
    std::size_t a_violations = 0;  ///< draws with (G', Delta') != (G*, Delta*) off A
};

/// Estimates the s1..s4 terms of a Stein coupling and its moment ledger.
CouplingTermReport estimate_theorem5_terms(std::span<const SteinCouplingDraw> draws);

}  // namespace steinkit
