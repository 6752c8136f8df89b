#pragma once

#include "infoloss/pwm_function.hpp"

namespace infoloss::catalog {

// |x| on the whole line; two branches meeting at 0.
PwmFunction magnitude();

// x^2 for x < 0, x for x >= 0; two branches.
PwmFunction sqlin();

// x^3 - 100x on the whole line; three branches split at +-10/sqrt(3),
// inverted in closed form.
PwmFunction cubic();

// cos(x) on [0, L*pi]; L monotone half-period branches.
PwmFunction cosine(int half_periods);

// x on the whole line; single branch, loss-free reference.
PwmFunction identity();

}  // namespace infoloss::catalog
