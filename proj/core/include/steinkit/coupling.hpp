#pragma once

#include <vector>

namespace steinkit {

/// One realization of a Stein coupling (W, W', G) together with the two
/// auxiliary copies used by the s1..s4 terms: (G', Delta') drawn
/// conditionally independently given the sigma-field of W, and (G*, Delta*)
/// drawn unconditionally independently.
struct SteinCouplingDraw {
    double w = 0.0;
    double w_prime = 0.0;
    double g = 0.0;
    double delta = 0.0;  ///< exactly w_prime - w
    double g_prime = 0.0;
    double delta_prime = 0.0;
    double g_star = 0.0;
    double delta_star = 0.0;
    bool on_a = false;  ///< event A; contains {G' != G*} and {Delta' != Delta*}
};

/// Palm coupling of a random measure on a finite carrier: the total mass
/// |Xi| and, per atom a, the weight Lambda({a}) and Y_a = |Xi_a| - |Xi|.
struct PalmAtom {
    double weight = 0.0;
    double y = 0.0;
};

struct PalmPanel {
    double total = 0.0;
    std::vector<PalmAtom> atoms;
    double b = 0.0;  ///< sqrt(Var |Xi|)
};

}  // namespace steinkit
