#pragma once

#include <vector>

namespace hypecast {

struct PreferenceCounts {
    std::vector<int> counts;  // votes per design
    int n = 0;                // total respondents; must equal sum(counts)

    static PreferenceCounts make(std::vector<int> counts, int n);
};

struct GofResult {
    double chi2 = 0.0;
    int df = 0;
    double p = 1.0;
};

// Goodness of fit against the uniform expectation n/k.
GofResult chi_square_gof(const PreferenceCounts& c);

// (observed - expected) / sqrt(expected), expected = n/k.
std::vector<double> standardized_residuals(const PreferenceCounts& c);

// Regularized upper incomplete gamma Q(a, x); series for x < a+1, Lentz
// continued fraction otherwise.
double regularized_gamma_q(double a, double x);

// Survival function of the chi-square distribution with df degrees of freedom.
double chi_square_sf(double chi2, int df);

}  // namespace hypecast
