#include "steinkit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace steinkit {
namespace {

void require_nonnegative(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
    }
}

void require_positive_b(double b) {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("B must be finite and > 0");
    }
}

double clip(double x) { return std::clamp(x, -1.0, 1.0); }

double min3(double a, double b, double c) { return std::min({a, b, c}); }

}  // namespace

void BoundTerms::validate() const {
    for (std::size_t i = 0; i < r.size(); ++i) {
        require_nonnegative(r[i], "bound term");
        require_nonnegative(se[i], "bound term standard error");
    }
}

double combine_theorem1(const BoundTerms& t) {
    t.validate();
    return 2.0 * t.r[0] + 11.0 * t.r[1] + 5.0 * t.r[2] + 10.0 * t.r[3] + 7.0 * t.r[4];
}

double combine_theorem2(const BoundTerms& t) {
    t.validate();
    return 2.0 * t.r[0] + 5.5 * t.r[1] + 5.0 * t.r[2] + 10.0 * t.r[3] + 7.0 * t.r[4];
}

double combine_corollary1(double s1, double s2, double s3) {
    require_nonnegative(s1, "s1");
    require_nonnegative(s2, "s2");
    require_nonnegative(s3, "s3");
    return 7.0 * s1 + 5.5 * s2 + 10.0 * s3;
}

double combine_theorem5(double s1, double s2, double s3, double s4) {
    require_nonnegative(s1, "s1");
    require_nonnegative(s2, "s2");
    require_nonnegative(s3, "s3");
    require_nonnegative(s4, "s4");
    return 9.0 * s1 + 11.0 * s2 + 5.0 * s3 + 10.0 * s4;
}

double bound_iid(double fourth_trunc_sum, double third_abs_sum, double b) {
    require_positive_b(b);
    require_nonnegative(fourth_trunc_sum, "fourth truncated moment sum");
    require_nonnegative(third_abs_sum, "third absolute moment sum");
    return 7.0 * std::sqrt(fourth_trunc_sum) / (b * b) + 15.5 * third_abs_sum / (b * b * b);
}

double bound_crm(const CrmMoments& m, double b, CrmBound variant) {
    require_positive_b(b);
    require_nonnegative(m.third_weighted, "weighted third moment");
    require_nonnegative(m.third_sum, "third moment sum");
    require_nonnegative(m.second_weighted, "weighted second moment");
    const double b2 = b * b;
    const double b3 = b2 * b;
    switch (variant) {
    case CrmBound::full:
        return 10.0 / b2 * std::sqrt(m.third_weighted) + 5.5 / b3 * m.third_sum +
               25.5 / b3 * m.second_weighted;
    case CrmBound::compact:
        return 10.0 / b2 * std::sqrt(m.third_weighted) + 31.0 / b3 * m.third_sum;
    case CrmBound::diffuse:
        return 5.5 / b3 * m.third_sum;
    }
    throw std::invalid_argument("unknown CRM bound variant");
}

double bound_excursion(double l, double mu, double b) {
    require_positive_b(b);
    require_nonnegative(l, "dependence range l");
    require_nonnegative(mu, "mean mu");
    const double lead = 14.0 * std::numbers::sqrt2 + 8.0;
    return lead * std::pow(l, 1.5) * std::sqrt(mu) / (b * b) + 102.0 * l * l * mu / (b * b * b);
}

void LocalDepParams::validate() const {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (!(rho > 2.0 && rho <= 4.0)) throw std::invalid_argument("rho must lie in (2, 4]");
    if (lam == 0 || lam > n) throw std::invalid_argument("lambda must lie in [1, n]");
    require_nonnegative(theta, "theta");
}

double bound_local_dependence(const LocalDepParams& p) {
    p.validate();
    const double n = static_cast<double>(p.n);
    const double lam = static_cast<double>(p.lam);
    return (16.0 + 67.0 * lam) * n * std::pow(p.theta, std::min(3.0, p.rho)) +
           28.0 * std::pow(p.theta, p.rho / 2.0) * std::sqrt(lam * n);
}

void CouplingMomentLedger::validate() const {
    for (double v : {g0, g1, g2, g3, d0, d1, d2, d3}) require_nonnegative(v, "moment root");
    if (!(p_a >= 0.0 && p_a <= 1.0)) throw std::invalid_argument("P[A] must lie in [0, 1]");
}

CouplingTerms bound_from_moment_ledger(const CouplingMomentLedger& m) {
    m.validate();
    CouplingTerms s;
    s.s1 = std::sqrt(m.g1 * m.g2 * m.d1 * m.d2 + 2.0 * m.g1 * m.g2 * m.d1 * m.d3 +
                     m.g1 * m.g3 * m.d1 * m.d3);
    s.s2 = m.g0 * m.d0 * m.d0;
    s.s3 = s.s2;
    const double d23 = std::min(m.d2, m.d3);
    s.s4 = (m.g1 * m.g2 * m.d2 + m.g1 * m.g2 * m.d3 + m.g1 * m.g2 * d23 + m.g1 * m.g3 * d23) *
           std::pow(m.p_a, 0.25);
    return s;
}

ClipInequalities lemma5_check(double a_p, double a_s, double b, double b_p, double b_s,
                              double tolerance) {
    ClipInequalities out;
    const double ab = std::abs(b);
    const double abp = std::abs(b_p);
    const double abs_ = std::abs(b_s);
    const double dp = std::abs(a_p);
    const double da = std::abs(a_p - a_s);
    const double db = std::abs(b_p - b_s);

    out.lhs[0] = std::abs(a_p * clip(b_p) - a_s * clip(b_s));
    out.rhs[0] = dp * std::min(db, 2.0) + da * std::min(abs_, 1.0);

    const double m_p = (b * b_p > 0.0) ? min3(ab, abp, 1.0) : 0.0;
    const double m_s = (b * b_s > 0.0) ? min3(ab, abs_, 1.0) : 0.0;
    out.lhs[1] = std::abs(a_p * m_p - a_s * m_s);
    out.rhs[1] = dp * std::min(db, 1.0) + da * min3(ab, abs_, 1.0);

    // Third inequality in the form its derivation yields: the closing factor
    // pairs b with b*, not b'.
    const double mbs = min3(ab, abs_, 1.0);
    out.lhs[2] = std::abs(a_p * m_p * m_p - a_s * m_s * m_s);
    out.rhs[2] = 2.0 * dp * std::min(ab, 1.0) * std::min(db, 1.0) + da * mbs * mbs;

    for (std::size_t i = 0; i < 3; ++i) {
        out.slack[i] = out.rhs[i] - out.lhs[i];
        out.holds[i] = out.slack[i] >= -tolerance;
    }
    return out;
}

}  // namespace steinkit
