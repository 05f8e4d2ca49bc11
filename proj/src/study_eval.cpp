#include "hypecast/study_eval.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hypecast/errors.hpp"

namespace hypecast {

PreferenceCounts PreferenceCounts::make(std::vector<int> counts, int n) {
    if (counts.empty()) throw ConfigError("preference counts must not be empty");
    for (int c : counts)
        if (c < 0) throw ConfigError("preference counts must be non-negative");
    int sum = std::accumulate(counts.begin(), counts.end(), 0);
    if (sum != n)
        throw ConfigError("counts sum to " + std::to_string(sum) + " but n is " +
                          std::to_string(n));
    return {std::move(counts), n};
}

GofResult chi_square_gof(const PreferenceCounts& c) {
    if (c.n == 0) throw std::domain_error("chi-square test is undefined for n = 0");
    const auto k = static_cast<int>(c.counts.size());
    const double expected = static_cast<double>(c.n) / k;
    double chi2 = 0.0;
    for (int o : c.counts) {
        double diff = o - expected;
        chi2 += diff * diff / expected;
    }
    GofResult r;
    r.chi2 = chi2;
    r.df = k - 1;
    r.p = chi_square_sf(chi2, r.df);
    return r;
}

std::vector<double> standardized_residuals(const PreferenceCounts& c) {
    if (c.n == 0) throw std::domain_error("residuals are undefined for n = 0");
    const double expected = static_cast<double>(c.n) / static_cast<double>(c.counts.size());
    std::vector<double> out;
    out.reserve(c.counts.size());
    for (int o : c.counts) out.push_back((o - expected) / std::sqrt(expected));
    return out;
}

namespace {

// Lower regularized gamma P(a, x) by power series; converges fast for x < a+1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ai = a;
    for (int i = 0; i < 500; ++i) {
        ai += 1.0;
        term *= x / ai;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by modified Lentz continued fraction;
// converges fast for x >= a+1.
double gamma_q_continued_fraction(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("regularized_gamma_q requires a > 0");
    if (x < 0.0) throw std::domain_error("regularized_gamma_q requires x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_continued_fraction(a, x);
}

double chi_square_sf(double chi2, int df) {
    if (df <= 0) throw std::domain_error("chi_square_sf requires df > 0");
    if (chi2 < 0.0) throw std::domain_error("chi_square_sf requires chi2 >= 0");
    return regularized_gamma_q(df / 2.0, chi2 / 2.0);
}

}  // namespace hypecast
