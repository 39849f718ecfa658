#include "relscat/kinematics.hpp"

#include "relscat/field.hpp"

namespace relscat {

double energy(const FieldModel& model, const KinState& state) {
    double c = model.light_speed();
    return c * c * std::sqrt(1.0 + norm2(state.p) / (c * c)) + model.V(state.x);
}

}  // namespace relscat
