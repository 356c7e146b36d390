#include "molmom/hahn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <mpfr.h>

#include "molmom/error.hpp"

namespace molmom {

namespace {

class MpReal {
public:
    explicit MpReal(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~MpReal() { mpfr_clear(v_); }
    MpReal(const MpReal&) = delete;
    MpReal& operator=(const MpReal&) = delete;
    operator mpfr_ptr() { return v_; }
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

void check_order(int s, const HahnParams& p) {
    if (s < 0 || s > p.n - 1)
        throw DomainError("Hahn order " + std::to_string(s) + " outside 0.." + std::to_string(p.n - 1));
}

void check_point(int a, const HahnParams& p) {
    if (a < 0 || a > p.n - 1)
        throw DomainError("Hahn argument " + std::to_string(a) + " outside 0.." + std::to_string(p.n - 1));
}

double log_sum_exp(const std::vector<double>& logs) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double l : logs) mx = std::max(mx, l);
    if (!std::isfinite(mx)) return mx;
    long double acc = 0;
    for (double l : logs) acc += std::exp(static_cast<long double>(l - mx));
    return mx + static_cast<double>(std::log(acc));
}

// Signed log-gamma; nullopt at poles.
std::optional<SignedLog> lgamma_signed(double x) {
    if (x <= 0 && x == std::floor(x)) return std::nullopt;
    const double g = std::tgamma(x);
    if (std::isfinite(g) && g != 0.0) return SignedLog{std::log(std::abs(g)), g < 0 ? -1 : 1};
    // large argument: only positive x overflows tgamma here
    return SignedLog{std::lgamma(x), 1};
}

// Terminating sum
//   sum_k (-1)^k (-s)_k (-a)_k [2N+mu+nu-s-1]_k / ([N+nu-1]_k [N-1]_k k!)
// with [x]_k the falling factorial. The terms alternate and grow far larger
// than the result (at N = 64 the loss exceeds 53 bits by order ~20), so the sum
// runs in MPFR. mu and nu enter exactly; the precision is raised until the
// measured cancellation is covered with 64 bits to spare.
SignedLog hypergeometric_sum(int s, int a, const HahnParams& p) {
    const int kmax = std::min(s, a);
    mpfr_prec_t prec = 128;
    for (;;) {
        MpReal c(prec), d(prec), e(prec), term(prec), sum(prec), factor(prec), max_abs(prec);
        // c = 2N+mu+nu-s-1, d = N+nu-1, e = N-1, all exact at this precision
        mpfr_set_d(c, p.mu, MPFR_RNDN);
        mpfr_add_d(c, c, p.nu, MPFR_RNDN);
        mpfr_add_si(c, c, 2L * p.n - s - 1, MPFR_RNDN);
        mpfr_set_d(d, p.nu, MPFR_RNDN);
        mpfr_add_si(d, d, p.n - 1L, MPFR_RNDN);
        mpfr_set_si(e, p.n - 1L, MPFR_RNDN);

        mpfr_set_si(term, 1, MPFR_RNDN);
        mpfr_set_si(sum, 1, MPFR_RNDN);
        mpfr_set_si(max_abs, 1, MPFR_RNDN);
        for (int k = 0; k < kmax; ++k) {
            // t_{k+1} = -t_k (k-s)(k-a)(c-k) / ((d-k)(e-k)(k+1))
            mpfr_mul_si(term, term, -1L * (k - s) * (k - a), MPFR_RNDN);
            mpfr_sub_si(factor, c, k, MPFR_RNDN);
            mpfr_mul(term, term, factor, MPFR_RNDN);
            mpfr_sub_si(factor, d, k, MPFR_RNDN);
            mpfr_div(term, term, factor, MPFR_RNDN);
            mpfr_sub_si(factor, e, k, MPFR_RNDN);
            mpfr_div(term, term, factor, MPFR_RNDN);
            mpfr_div_si(term, term, k + 1L, MPFR_RNDN);
            mpfr_add(sum, sum, term, MPFR_RNDN);
            if (mpfr_cmpabs(term, max_abs) > 0) mpfr_abs(max_abs, term, MPFR_RNDN);
        }
        const long max_exp = mpfr_get_exp(max_abs.get());
        if (mpfr_zero_p(sum.get())) {
            if (max_exp + 64 < prec) return {0.0, 0};
        } else {
            const long lost = max_exp - mpfr_get_exp(sum.get());
            if (lost + 64 < prec) {
                long exp2 = 0;
                const double mant = mpfr_get_d_2exp(&exp2, sum, MPFR_RNDN);
                return {std::log(std::abs(mant)) + static_cast<double>(exp2) * std::log(2.0),
                        mant < 0 ? -1 : 1};
            }
        }
        if (prec > 1 << 16) throw DomainError("Hahn sum did not converge in multiprecision");
        prec = std::max<mpfr_prec_t>(2 * prec, max_exp + 128);
    }
}

}  // namespace

void HahnParams::validate() const {
    if (!(mu > -1.0) || !std::isfinite(mu)) throw DomainError("Hahn parameter mu must exceed -1");
    if (!(nu > -1.0) || !std::isfinite(nu)) throw DomainError("Hahn parameter nu must exceed -1");
    if (n < 2) throw DomainError("Hahn lattice size must be >= 2");
}

double hahn_weight_log(int s, int a, const HahnParams& p) {
    p.validate();
    check_order(s, p);
    check_point(a, p);
    const double N = p.n;
    return std::lgamma(N) - std::lgamma(N - s) - std::lgamma(a + 1.0) - std::lgamma(a + p.mu + 1.0) -
           std::lgamma(N + p.nu - a) - std::lgamma(N - a);
}

double hahn_weight_log_recurrence(int s, int a, const HahnParams& p) {
    p.validate();
    check_order(s, p);
    check_point(a, p);
    const double N = p.n;
    double w = -(std::lgamma(p.mu + 1.0) + std::lgamma(N + p.nu) + std::lgamma(N - s));
    for (int j = 1; j <= a; ++j)
        w += std::log((N - j) * (N + p.nu - j)) - std::log(j * (j + p.mu));
    return w;
}

SignedLog hahn_direct_log(int s, int a, const HahnParams& p) {
    p.validate();
    check_order(s, p);
    check_point(a, p);
    const double N = p.n;
    const auto sum = hypergeometric_sum(s, a, p);
    if (sum.sign == 0) return sum;
    return pochhammer_log(N + p.nu - 1, s) * pochhammer_log(N - 1, s) * sum;
}

double hahn_direct(int s, int a, const HahnParams& p) { return hahn_direct_log(s, a, p).value(); }

double hahn_norm_sq_log(int s, const HahnParams& p) {
    p.validate();
    check_order(s, p);
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(p.n));
    for (int a = 0; a < p.n; ++a) {
        const auto h = hahn_direct_log(s, a, p);
        if (h.sign == 0) continue;
        logs.push_back(2.0 * h.log_abs + hahn_weight_log(s, a, p));
    }
    return log_sum_exp(logs);
}

std::optional<double> hahn_norm_sq_closed_form_log(int s, const HahnParams& p) {
    p.validate();
    check_order(s, p);
    const double N = p.n, m = p.mu, v = p.nu;
    const double num_args[] = {2 * N + m + v - s};
    const double den_args[] = {2 * N + m + v - 2 * s - 1, N + m + v - s, s + 1.0,
                               N + m - s, N + v - s, N - s};
    SignedLog acc{0.0, 1};
    for (double x : num_args) {
        const auto g = lgamma_signed(x);
        if (!g) return std::nullopt;
        acc = acc * *g;
    }
    for (double x : den_args) {
        const auto g = lgamma_signed(x);
        if (!g) return std::nullopt;
        acc = acc / *g;
    }
    if (acc.sign <= 0) return std::nullopt;
    return acc.log_abs;
}

double hahn_normalized(int s, int a, const HahnParams& p) {
    const auto h = hahn_direct_log(s, a, p);
    if (h.sign == 0) return 0.0;
    const double w = hahn_weight_log(s, a, p);
    if (!std::isfinite(w)) return 0.0;
    return h.sign * std::exp(h.log_abs + 0.5 * (w - hahn_norm_sq_log(s, p)));
}

HahnBasisTable::HahnBasisTable(const HahnParams& p, int max_order) : params_(p), max_order_(max_order) {
    p.validate();
    if (max_order < 0 || max_order > p.n - 1)
        throw DomainError("Hahn table order " + std::to_string(max_order) + " outside 0.." +
                          std::to_string(p.n - 1));
    const auto rows = static_cast<std::size_t>(max_order) + 1;
    const auto cols = static_cast<std::size_t>(p.n);
    values_.assign(rows * cols, 0.0);
    weight_log_.assign(rows * cols, 0.0);
    norm_sq_log_.assign(rows, 0.0);
    source_.assign(rows, HahnRowSource::direct);
}

namespace {

// Fills one row from the direct sum; also stores weights and norm.
void direct_row(int s, const HahnParams& p, double* values, double* weights, double& norm_log) {
    std::vector<SignedLog> h(static_cast<std::size_t>(p.n));
    std::vector<double> logs;
    for (int a = 0; a < p.n; ++a) {
        h[static_cast<std::size_t>(a)] = hahn_direct_log(s, a, p);
        weights[a] = hahn_weight_log(s, a, p);
        if (h[static_cast<std::size_t>(a)].sign != 0)
            logs.push_back(2.0 * h[static_cast<std::size_t>(a)].log_abs + weights[a]);
    }
    norm_log = log_sum_exp(logs);
    for (int a = 0; a < p.n; ++a) {
        const auto& ha = h[static_cast<std::size_t>(a)];
        values[a] = ha.sign == 0 ? 0.0 : ha.sign * std::exp(ha.log_abs + 0.5 * (weights[a] - norm_log));
    }
}

}  // namespace

HahnBasisTable HahnBasisTable::direct(const HahnParams& p, int max_order) {
    HahnBasisTable t(p, max_order);
    const auto n = static_cast<std::size_t>(p.n);
    for (int s = 0; s <= max_order; ++s) {
        const auto off = static_cast<std::size_t>(s) * n;
        direct_row(s, p, t.values_.data() + off, t.weight_log_.data() + off,
                   t.norm_sq_log_[static_cast<std::size_t>(s)]);
    }
    return t;
}

double HahnBasisTable::orthonormality_error() const {
    double worst = 0;
    for (int p = 0; p <= max_order_; ++p)
        for (int q = p; q <= max_order_; ++q) {
            long double g = 0;
            for (int a = 0; a < params_.n; ++a) g += static_cast<long double>((*this)(p, a)) * (*this)(q, a);
            worst = std::max(worst, std::abs(static_cast<double>(g) - (p == q ? 1.0 : 0.0)));
        }
    return worst;
}

HahnBasisTable hahn_recurrence_table(const HahnParams& p, int max_order) {
    HahnBasisTable t = HahnBasisTable::direct(p, max_order);
    const auto n = static_cast<std::size_t>(p.n);
    const double N = p.n, mu = p.mu, nu = p.nu;

    // Seeds: h~_0 = sqrt(rho_0/d_0^2), h~_1 = ((N+nu-1)(N-1) - (2N+mu+nu-2)a) sqrt(rho_1/d_1^2).
    for (int s = 0; s <= std::min(1, max_order); ++s) {
        for (int a = 0; a < p.n; ++a) {
            const double poly = s == 0 ? 1.0 : (N + nu - 1) * (N - 1) - (2 * N + mu + nu - 2) * a;
            const double seed =
                poly * std::exp(0.5 * (t.weight_log(s, a) - t.norm_sq_log(s)));
            const std::size_t idx = static_cast<std::size_t>(s) * n + static_cast<std::size_t>(a);
            const double ref = t.values_[idx];
            if (std::abs(seed - ref) > 1e-9 * std::max(std::abs(ref), 1e-3)) {
                std::ostringstream msg;
                msg << "seed row " << s << " deviates from the direct sum at a=" << a;
                t.diagnostics_.push_back(msg.str());
                continue;
            }
            t.values_[idx] = seed;
        }
        t.source_[static_cast<std::size_t>(s)] = HahnRowSource::seed;
    }

    const double row_scale = 1.0 / std::sqrt(N);
    for (int s = 2; s <= max_order; ++s) {
        const double A = -(s * (2 * N + mu + nu - s)) / ((2 * N + mu + nu - 2 * s - 1) * (2 * N + mu + nu - 2 * s));
        const double C = (N - s + 1) * (N - s + mu + 1) / (2 * N + mu + nu - 2 * s + 2) *
                         ((N - s + nu + 1) * (N - s + mu + nu + 1)) / (2 * N + mu + nu - 2 * s + 1);
        const double b_den = 4 * (mu * mu - nu * nu) * (2 * N + mu + nu);
        std::ostringstream msg;
        if (b_den == 0.0 || A == 0.0) {
            msg << "order " << s << ": recurrence coefficient singular (mu^2 == nu^2), direct sum used";
            t.diagnostics_.push_back(msg.str());
            continue;
        }
        const double b_shift = (2 * (N - 1) + nu - mu) / b_den;
        const double r1 = std::exp(0.5 * (t.norm_sq_log(s - 1) - t.norm_sq_log(s)));
        const double r2 = std::exp(0.5 * (t.norm_sq_log(s - 2) - t.norm_sq_log(s)));

        std::vector<double> candidate(n);
        double worst = 0;
        for (int a = 0; a < p.n; ++a) {
            const double B = a - b_shift;
            candidate[static_cast<std::size_t>(a)] = (B * r1 * t(s - 1, a) + C * r2 * t(s - 2, a)) / A;
            const double ref = t(s, a);
            const double err = std::abs(candidate[static_cast<std::size_t>(a)] - ref) /
                               std::max(std::abs(ref), row_scale);
            worst = std::max(worst, std::isfinite(err) ? err : std::numeric_limits<double>::infinity());
        }
        if (worst > 1e-6) {
            msg << "order " << s << ": recurrence disagrees with direct sum (max rel err " << worst
                << "), direct sum used";
            t.diagnostics_.push_back(msg.str());
            continue;
        }
        std::copy(candidate.begin(), candidate.end(), t.values_.begin() + static_cast<std::ptrdiff_t>(s) * p.n);
        t.source_[static_cast<std::size_t>(s)] = HahnRowSource::recurrence;
    }
    return t;
}

}  // namespace molmom
