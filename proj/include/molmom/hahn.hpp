#pragma once

#include <optional>
#include <string>
#include <vector>

#include "molmom/special.hpp"

namespace molmom {

// Shape parameters of the discrete Hahn basis on {0, ..., n-1}.
struct HahnParams {
    double mu = 0.0;
    double nu = 0.0;
    int n = 64;

    void validate() const;  // mu > -1, nu > -1, n >= 2
    friend bool operator==(const HahnParams&, const HahnParams&) = default;
};

// log rho_s(a): seed rho_s(0) = 1/(Gamma(mu+1) Gamma(N+nu) Gamma(N-s)) carried up in a by
// rho_s(a) = (N-a)(N+nu-a) / (a(a+mu)) rho_s(a-1), evaluated in closed log-gamma form.
double hahn_weight_log(int s, int a, const HahnParams& p);
// Same weight by running the product recurrence in a; cross-check path.
double hahn_weight_log_recurrence(int s, int a, const HahnParams& p);

// log d_s^2 with d_s^2 = sum_a h_s(a)^2 rho_s(a), the norm that makes the scaled basis orthonormal.
double hahn_norm_sq_log(int s, const HahnParams& p);
// Closed-form square norm in the Gamma-ratio form commonly quoted for this basis.
// nullopt where a Gamma argument hits a pole. Diagnostic only: it does not match
// the brute-force norm above.
std::optional<double> hahn_norm_sq_closed_form_log(int s, const HahnParams& p);

// h_s(a) from the terminating hypergeometric sum, in sign/log form.
SignedLog hahn_direct_log(int s, int a, const HahnParams& p);
double hahn_direct(int s, int a, const HahnParams& p);

// h~_s(a) = h_s(a) sqrt(rho_s(a) / d_s^2).
double hahn_normalized(int s, int a, const HahnParams& p);

enum class HahnRowSource { direct, seed, recurrence };

// Normalised Hahn values for orders 0..max_order over a = 0..n-1. Immutable once built.
class HahnBasisTable {
public:
    // Every row from the direct sum.
    static HahnBasisTable direct(const HahnParams& p, int max_order);

    const HahnParams& params() const noexcept { return params_; }
    int max_order() const noexcept { return max_order_; }
    int n() const noexcept { return params_.n; }

    double operator()(int s, int a) const noexcept {
        return values_[static_cast<std::size_t>(s) * static_cast<std::size_t>(params_.n) +
                       static_cast<std::size_t>(a)];
    }
    const double* row(int s) const noexcept {
        return values_.data() + static_cast<std::size_t>(s) * static_cast<std::size_t>(params_.n);
    }
    double weight_log(int s, int a) const noexcept {
        return weight_log_[static_cast<std::size_t>(s) * static_cast<std::size_t>(params_.n) +
                           static_cast<std::size_t>(a)];
    }
    double norm_sq_log(int s) const noexcept { return norm_sq_log_[static_cast<std::size_t>(s)]; }

    HahnRowSource row_source(int s) const noexcept { return source_[static_cast<std::size_t>(s)]; }
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

    // max |sum_a h~_p h~_q - delta_pq| over the table.
    double orthonormality_error() const;

private:
    friend HahnBasisTable hahn_recurrence_table(const HahnParams& p, int max_order);
    HahnBasisTable(const HahnParams& p, int max_order);

    HahnParams params_;
    int max_order_ = 0;
    std::vector<double> values_;
    std::vector<double> weight_log_;
    std::vector<double> norm_sq_log_;
    std::vector<HahnRowSource> source_;
    std::vector<std::string> diagnostics_;
};

// Seeds rows 0 and 1 from their closed forms, then tries the three-term
// recurrence in the order for s >= 2. Each recurrence row is checked cell by
// cell against the direct sum (1e-6 relative); a row that disagrees, or whose
// coefficients are singular (mu == nu), is replaced by the direct row and a
// diagnostic is recorded.
HahnBasisTable hahn_recurrence_table(const HahnParams& p, int max_order);

}  // namespace molmom
