#pragma once

#include <vector>

#include "infoloss/density.hpp"
#include "infoloss/pwm_function.hpp"

namespace infoloss {

// L-branch map with information loss exactly log2(L) under d: every branch
// carries source mass 1/L and maps onto the common image [0, 1/L] through
// the source cdf, so the preimage density ratio is L everywhere. signs[l]
// selects a rising (+1) or falling (-1) branch. boundaries, when given, must
// be L-1 interior points splitting the support into mass-1/L cells.
PwmFunction build_tight(const DensityPtr& d, int L, const std::vector<int>& signs,
                        const std::vector<double>& boundaries = {});

// General cdf-composed piecewise map: branch l is
//   signs[l] * F_X(x) + offsets[l]
// on the l-th cell. Boundaries default to the equal-mass quantiles. The pdf
// must stay positive inside every cell.
PwmFunction build_cdf_piecewise(const DensityPtr& d, int L, const std::vector<int>& signs,
                                const std::vector<double>& offsets,
                                std::vector<double> boundaries = {});

}  // namespace infoloss
