#include "steinkit/identity.hpp"

#include <cmath>
#include <stdexcept>

namespace steinkit {

TestFunction parse_test_function(std::string_view id) {
    if (id == "1") return TestFunction::one;
    if (id == "w" || id == "x") return TestFunction::identity;
    if (id == "w2" || id == "x2") return TestFunction::square;
    if (id == "cos") return TestFunction::cosine;
    throw std::invalid_argument("unknown test function id '" + std::string(id) + "'");
}

std::string to_string(TestFunction f) {
    switch (f) {
    case TestFunction::one: return "1";
    case TestFunction::identity: return "w";
    case TestFunction::square: return "w2";
    case TestFunction::cosine: return "cos";
    }
    return "?";
}

double evaluate(TestFunction f, double x) noexcept {
    switch (f) {
    case TestFunction::one: return 1.0;
    case TestFunction::identity: return x;
    case TestFunction::square: return x * x;
    case TestFunction::cosine: return std::cos(x);
    }
    return 0.0;
}

Estimate stein_identity_residual(std::span<const SteinCouplingDraw> draws, TestFunction f) {
    std::vector<double> terms;
    terms.reserve(draws.size());
    for (const auto& d : draws) {
        terms.push_back(d.g * (evaluate(f, d.w_prime) - evaluate(f, d.w)) - d.w * evaluate(f, d.w));
    }
    return mean_with_se(terms);
}

Estimate palm_identity_residual(std::span<const PalmPanel> panels, TestFunction f) {
    std::vector<double> terms;
    terms.reserve(panels.size());
    for (const auto& p : panels) {
        if (p.atoms.empty()) throw std::invalid_argument("Palm identity needs a nonempty carrier");
        double rhs = 0.0;
        for (const auto& a : p.atoms) rhs += a.weight * evaluate(f, p.total + a.y);
        terms.push_back(p.total * evaluate(f, p.total) - rhs);
    }
    return mean_with_se(terms);
}

}  // namespace steinkit
