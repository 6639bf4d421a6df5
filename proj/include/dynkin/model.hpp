#pragma once

namespace dynkin {

/// Perpetual real option on a geometric Brownian motion
///
///     dX = mu X dt + sigma X dW,   payoff g(x) = (x - K)^+,   discount rate r.
///
/// Parameters are validated eagerly (sigma > 0, K > 0, r >= 0, mu < r); every
/// closed form below degenerates otherwise. Instances are immutable.
class GbmModel {
public:
    GbmModel(double mu, double sigma, double rate, double strike);

    double mu() const noexcept { return mu_; }
    double sigma() const noexcept { return sigma_; }
    double rate() const noexcept { return rate_; }
    double strike() const noexcept { return strike_; }

    /// Positive root of sigma^2/2 e(e-1) + mu e - r = 0; always > 1.
    double eta() const noexcept { return eta_; }

    /// One-player exercise threshold B = eta K / (eta - 1) > K.
    double threshold() const noexcept { return threshold_; }

    double payoff(double x) const noexcept;

    /// One-player value: (B-K)(x/B)^eta below B, x-K above. Requires x > 0.
    double value(double x) const;

    /// E_x[exp(-r tau_L)] for the first passage to an upper level L >= x.
    /// Non-hitting paths carry zero mass, so no infinity handling is needed.
    double hitting_discount(double x, double level) const;

    static double eta_of(double mu, double sigma, double rate);
    static double threshold_of(double eta, double strike);

private:
    double mu_;
    double sigma_;
    double rate_;
    double strike_;
    double eta_;
    double threshold_;
};

}  // namespace dynkin
