#include "steinkit/models/crm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "steinkit/error.hpp"

namespace steinkit::models {
namespace {

unsigned inverse_cdf(const std::vector<double>& cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) return static_cast<unsigned>(cdf.size() - 1);
    return static_cast<unsigned>(it - cdf.begin());
}

}  // namespace

AtomLaw::AtomLaw(std::vector<double> pmf) : pmf_(std::move(pmf)) {
    if (pmf_.empty()) throw std::invalid_argument("atom pmf is empty");
    double total = 0.0;
    for (double p : pmf_) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("atom pmf has a negative entry");
        total += p;
    }
    if (!(total > 0.0)) throw std::invalid_argument("atom pmf has zero mass");
    for (double& p : pmf_) p /= total;
    while (pmf_.size() > 1 && pmf_.back() == 0.0) pmf_.pop_back();

    mean_ = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) mean_ += static_cast<double>(k) * pmf_[k];
    if (!(mean_ > 0.0)) throw std::invalid_argument("atom law has zero mean; Palm version undefined");

    cdf_.resize(pmf_.size());
    biased_cdf_.resize(pmf_.size());
    double acc = 0.0;
    double bacc = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) {
        acc += pmf_[k];
        bacc += static_cast<double>(k) * pmf_[k] / mean_;
        cdf_[k] = acc;
        biased_cdf_[k] = bacc;
    }
    cdf_.back() = 1.0;
    biased_cdf_.back() = 1.0;
}

AtomLaw AtomLaw::from_pmf(std::vector<double> pmf) { return AtomLaw(std::move(pmf)); }

AtomLaw AtomLaw::point_mass(unsigned c) {
    std::vector<double> pmf(c + 1, 0.0);
    pmf[c] = 1.0;
    return AtomLaw(std::move(pmf));
}

AtomLaw AtomLaw::uniform_on(std::span<const unsigned> values) {
    if (values.empty()) throw std::invalid_argument("uniform atom law needs values");
    const unsigned top = *std::max_element(values.begin(), values.end());
    std::vector<double> pmf(top + 1, 0.0);
    for (unsigned v : values) {
        if (pmf[v] != 0.0) throw std::invalid_argument("uniform atom law values must be distinct");
        pmf[v] = 1.0;
    }
    return AtomLaw(std::move(pmf));
}

AtomLaw AtomLaw::truncated_poisson(double mu, unsigned cut) {
    if (!(mu > 0.0)) throw std::invalid_argument("poisson mean must be positive");
    std::vector<double> pmf(cut + 1);
    for (unsigned k = 0; k <= cut; ++k) {
        pmf[k] = std::exp(static_cast<double>(k) * std::log(mu) - mu - std::lgamma(k + 1.0));
    }
    return AtomLaw(std::move(pmf));
}

double AtomLaw::moment(int order) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) acc += std::pow(static_cast<double>(k), order) * pmf_[k];
    return acc;
}

double AtomLaw::variance() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) {
        const double d = static_cast<double>(k) - mean_;
        acc += d * d * pmf_[k];
    }
    return acc;
}

AtomLaw::Pair AtomLaw::draw_pair(double u) const {
    return {inverse_cdf(cdf_, u), inverse_cdf(biased_cdf_, u)};
}

std::string AtomLaw::describe() const {
    std::ostringstream os;
    os << "pmf[";
    for (std::size_t k = 0; k < pmf_.size(); ++k) os << (k ? "," : "") << pmf_[k];
    os << "]";
    return os.str();
}

CrmModel::CrmModel(std::vector<AtomLaw> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw std::invalid_argument("CRM carrier is empty");
    double var = 0.0;
    for (const auto& a : atoms_) {
        lambda_ += a.mean();
        var += a.variance();
    }
    if (!(var > 0.0)) throw DegenerateModelError("CRM total mass is deterministic (variance 0)");
    b_ = std::sqrt(var);
}

PalmPanel CrmModel::draw(Rng& rng) const {
    PalmPanel panel;
    panel.b = b_;
    panel.atoms.resize(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const auto pair = atoms_[i].draw_pair(rng.uniform());
        panel.total += pair.x;
        panel.atoms[i] = {atoms_[i].mean(),
                          static_cast<double>(pair.biased) - static_cast<double>(pair.x)};
    }
    return panel;
}

double CrmModel::draw_w(Rng& rng) const {
    double total = 0.0;
    for (const auto& a : atoms_) total += a.draw_pair(rng.uniform()).x;
    return (total - lambda_) / b_;
}

CrmMoments CrmModel::bound_moments() const {
    CrmMoments m;
    for (const auto& a : atoms_) {
        const double third = a.moment(3);
        m.third_weighted += third * a.mean();
        m.third_sum += third;
        m.second_weighted += a.moment(2) * a.mean();
    }
    return m;
}

}  // namespace steinkit::models
