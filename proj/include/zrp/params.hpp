/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zrp {

/* Thrown when an argument leaves the convergence domain of a series or
 * product (e.g. |z| >= 1 in an infinite q-Pochhammer symbol). */
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/* Thrown when a truncated Fock-space computation cannot reach the requested
 * accuracy within the allowed cutoff. */
struct insufficient_cutoff : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Thrown when a computation is asked for outside the parameter regime in
 * which it defines a stochastic process. */
struct regime_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/* Model parameters (q, mu), both in the open interval (0,1), plus the sign
 * selecting the physical regime. Only the +1 regime is supported; the
 * inverse regime 0 < q^{-1}, mu^{-1} < 1 is rejected at construction. */
struct ModelParams {
    double q;
    double mu;
    int epsilon = +1;

    ModelParams(double q_, double mu_, int epsilon_ = +1)
        : q(q_), mu(mu_), epsilon(epsilon_) {
        if (!(q > 0.0 && q < 1.0))
            throw regime_error("ModelParams: q must lie in (0,1), got " + std::to_string(q_));
        if (!(mu > 0.0 && mu < 1.0))
            throw regime_error("ModelParams: mu must lie in (0,1), got " + std::to_string(mu_));
        if (epsilon != +1)
            throw regime_error("ModelParams: only the epsilon=+1 regime is supported");
    }
};

/* Fixed cluster of first-class particles at sites 1..s. The boundary
 * occupancies d_1 and d_s must be positive so the cluster location is well
 * defined; interior zeros are allowed. s = 0 means no defects. */
struct DefectPattern {
    std::vector<int> d;

    DefectPattern() = default;
    explicit DefectPattern(std::vector<int> d_) : d(std::move(d_)) {
        for (int di : d)
            if (di < 0) throw std::invalid_argument("DefectPattern: occupancies must be >= 0");
        if (!d.empty() && (d.front() < 1 || d.back() < 1))
            throw std::invalid_argument("DefectPattern: d_1 and d_s must be >= 1");
    }

    int size() const { return static_cast<int>(d.size()); }
    int total() const {
        int t = 0;
        for (int di : d) t += di;
        return t;
    }
};

/* Mixture weights of the right- and left-moving dynamics. The total current
 * across the bond (r, r+1) is a*J(r)_+ - b*J(r+1)_-. */
struct CurrentMix {
    double a = 1.0;
    double b = 1.0;

    CurrentMix() = default;
    CurrentMix(double a_, double b_) : a(a_), b(b_) {
        if (a < 0.0 || b < 0.0)
            throw std::invalid_argument("CurrentMix: weights must be >= 0");
    }
};

}  // namespace zrp
