#include "dynkin/model.hpp"

#include <cmath>
#include <sstream>

#include "dynkin/error.hpp"

namespace dynkin {

namespace {

std::string describe(double mu, double sigma, double rate, double strike) {
    std::ostringstream os;
    os << "mu=" << mu << " sigma=" << sigma << " r=" << rate << " K=" << strike;
    return os.str();
}

}  // namespace

double GbmModel::eta_of(double mu, double sigma, double rate) {
    const double s2 = sigma * sigma;
    const double a = (s2 - 2.0 * mu) / (2.0 * s2);
    return a + std::sqrt(a * a + 2.0 * rate / s2);
}

double GbmModel::threshold_of(double eta, double strike) {
    if (!(eta > 1.0)) throw Error(Errc::invalid_model, "eta must exceed 1");
    return eta * strike / (eta - 1.0);
}

GbmModel::GbmModel(double mu, double sigma, double rate, double strike)
    : mu_(mu), sigma_(sigma), rate_(rate), strike_(strike) {
    const bool finite = std::isfinite(mu) && std::isfinite(sigma) && std::isfinite(rate) &&
                        std::isfinite(strike);
    if (!finite || !(sigma > 0.0) || !(strike > 0.0) || !(rate >= 0.0) || !(mu < rate)) {
        throw Error(Errc::invalid_model,
                    "need sigma>0, K>0, r>=0, mu<r; got " + describe(mu, sigma, rate, strike));
    }
    eta_ = eta_of(mu, sigma, rate);
    if (!(eta_ > 1.0) || !std::isfinite(eta_)) {
        throw Error(Errc::invalid_model,
                    "eta not in (1, inf) for " + describe(mu, sigma, rate, strike));
    }
    threshold_ = threshold_of(eta_, strike);
}

double GbmModel::payoff(double x) const noexcept { return x > strike_ ? x - strike_ : 0.0; }

double GbmModel::value(double x) const {
    if (!(x > 0.0)) throw Error(Errc::nonpositive_state, "GBM value needs x > 0");
    if (x >= threshold_) return x - strike_;
    return (threshold_ - strike_) * std::pow(x / threshold_, eta_);
}

double GbmModel::hitting_discount(double x, double level) const {
    if (!(x > 0.0)) throw Error(Errc::nonpositive_state, "hitting discount needs x > 0");
    if (level < x) throw Error(Errc::level_below_state, "level must be >= starting state");
    if (level == x) return 1.0;
    return std::pow(x / level, eta_);
}

}  // namespace dynkin
