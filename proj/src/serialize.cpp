#include "dynkin/serialize.hpp"

namespace dynkin {

Json to_json(const EquilibriumProfile& profile) {
    Json j;
    j["region"] = std::string(to_string(profile.region));
    const bool reflection = profile.kind == ProfileKind::reflection;
    j["gamma0_star"] = reflection ? Json(profile.gamma0_star) : Json(nullptr);
    j["q1"] = reflection ? Json(profile.q1) : Json(nullptr);
    if (profile.relabeled) {
        j["values"] = Json::array({profile.value2, profile.value1});
    } else {
        j["values"] = Json::array({profile.value1, profile.value2});
    }
    j["scale"] = reflection ? Json(profile.rule1.scale) : Json(nullptr);
    j["relabeled"] = profile.relabeled;
    return j;
}

Json to_json(const Estimate& estimate) {
    Json j;
    j["player"] = estimate.player;
    j["mean"] = estimate.mean;
    j["stderr"] = estimate.std_error;
    j["n"] = estimate.n;
    j["seed"] = estimate.seed;
    j["mode"] = std::string(to_string(estimate.mode));
    return j;
}

Json to_json(const std::vector<EvalReport>& reports) {
    Json arr = Json::array();
    for (const auto& r : reports) {
        Json j;
        j["check"] = r.check;
        j["target_source"] = r.target_source;
        j["target"] = r.target;
        j["estimate"] = r.estimate;
        j["stderr"] = r.std_error ? Json(*r.std_error) : Json(nullptr);
        j["tolerance"] = r.tolerance;
        j["pass"] = r.pass;
        j["detail"] = r.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace dynkin
