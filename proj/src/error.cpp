#include "dynkin/error.hpp"

namespace dynkin {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_model: return "invalid-model";
        case Errc::invalid_argument: return "invalid-argument";
        case Errc::nonpositive_state: return "nonpositive-state";
        case Errc::level_below_state: return "level-below-state";
        case Errc::out_of_domain: return "out-of-domain";
        case Errc::invalid_grid: return "invalid-grid";
        case Errc::non_convergence: return "non-convergence";
        case Errc::corrupt_oracle: return "corrupt-oracle";
        case Errc::not_invertible: return "not-invertible";
        case Errc::belief_above_prior: return "belief-above-prior";
        case Errc::wrong_region: return "wrong-region";
        case Errc::no_equilibrium: return "no-equilibrium";
        case Errc::non_gbm_oracle: return "non-gbm-oracle";
        case Errc::invalid_config: return "invalid-config";
        case Errc::io: return "io";
    }
    return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace dynkin
