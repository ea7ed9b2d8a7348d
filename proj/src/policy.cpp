#include "coopstab/policy.hpp"

#include "coopstab/error.hpp"

#include <string>

namespace coopstab {

namespace {

void require_unit(double v, std::string_view name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidParameter(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
    }
}

} // namespace

std::string_view to_string(KeepPriority k) {
    return k == KeepPriority::receiver ? "1" : "0";
}

void Admission::validate() const {
    require_unit(f_s, "f_s");
    require_unit(f_sd, "f_sd");
}

void RaPolicy::validate() const {
    require_unit(alpha_s, "alpha_s");
    require_unit(alpha_sp, "alpha_sp");
    require_unit(alpha_sd, "alpha_sd");
    if (alpha_s + alpha_sp > 1.0 + 1e-12) {
        throw InvalidParameter("alpha_s + alpha_sp must not exceed 1");
    }
    admission.validate();
}

void TdmaPolicy::validate() const {
    require_unit(omega, "omega");
    require_unit(alpha, "alpha");
    admission.validate();
}

} // namespace coopstab
