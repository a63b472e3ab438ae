#pragma once

// Weight -1 Rota-Baxter models: Laurent polynomials and even log forms.

#include "confamp/laurent.hpp"
#include "confamp/logform.hpp"

namespace confamp {

// T(x)T(y) - T(x T(y)) - T(T(x) y) + T(x y); zero for a weight -1 operator.
template <class R, class Op> R rota_baxter_defect(Op &&T, const R &x, const R &y) {
  return T(x) * T(y) - T(x * T(y)) - T(T(x) * y) + T(x * y);
}

} // namespace confamp
