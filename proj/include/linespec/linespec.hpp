#ifndef LINESPEC_LINESPEC_HPP
#define LINESPEC_LINESPEC_HPP

// Umbrella header for the line spectrum estimation toolkit.

#include "linespec/bench.hpp"
#include "linespec/bessel.hpp"
#include "linespec/bounds.hpp"
#include "linespec/esprit.hpp"
#include "linespec/map_estimator.hpp"
#include "linespec/projections.hpp"
#include "linespec/random.hpp"
#include "linespec/scenario_io.hpp"
#include "linespec/signal_model.hpp"
#include "linespec/von_mises.hpp"

#endif
