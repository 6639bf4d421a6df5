#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dynkin {

enum class Errc {
    invalid_model,
    invalid_argument,
    nonpositive_state,
    level_below_state,
    out_of_domain,
    invalid_grid,
    non_convergence,
    corrupt_oracle,
    not_invertible,
    belief_above_prior,
    wrong_region,
    no_equilibrium,
    non_gbm_oracle,
    invalid_config,
    io,
};

std::string_view to_string(Errc code) noexcept;

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace dynkin
