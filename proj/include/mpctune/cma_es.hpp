#pragma once

#include "mpctune/bo.hpp"

namespace mpctune {

// (mu_w, lambda)-CMA-ES over the normalized search box. Population size
// 4 + floor(3 ln d), initial mean at the space center, initial step 0.3 of
// the (unit) range, boundary handling by resampling. Emits one trace row per
// objective evaluation. Restarts from the incumbent with a reset step size on
// covariance degeneracy.
TuningTrace cma_es(const TuneObjective& objective, const SearchSpace& space, int budget,
                   Rng& rng);

int cma_population_size(int dim);

}  // namespace mpctune
