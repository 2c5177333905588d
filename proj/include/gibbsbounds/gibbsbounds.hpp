#pragma once

// Rigorous bounds for the probability generating functional, intensity,
// correlation functions and F/G/K summary statistics of stationary locally
// stable Gibbs point processes, with the simulation and estimation machinery
// needed to check them empirically.

#include "gibbsbounds/bounds.hpp"
#include "gibbsbounds/csv.hpp"
#include "gibbsbounds/errors.hpp"
#include "gibbsbounds/estimate.hpp"
#include "gibbsbounds/geometry.hpp"
#include "gibbsbounds/grid_index.hpp"
#include "gibbsbounds/interaction.hpp"
#include "gibbsbounds/interval.hpp"
#include "gibbsbounds/lambert.hpp"
#include "gibbsbounds/model_json.hpp"
#include "gibbsbounds/quadrature.hpp"
#include "gibbsbounds/rng.hpp"
#include "gibbsbounds/simulate.hpp"
