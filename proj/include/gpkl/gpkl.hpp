#pragma once

// Interval selection for Gaussian process data: local KL divergence over
// contiguous windows, exhaustive maximization, bootstrap inference,
// window-restricted discriminant analysis, and the simulation studies.

#include "gpkl/bootstrap.hpp"
#include "gpkl/cholesky.hpp"
#include "gpkl/discriminant.hpp"
#include "gpkl/divergence.hpp"
#include "gpkl/errors.hpp"
#include "gpkl/gaussian.hpp"
#include "gpkl/grid.hpp"
#include "gpkl/io.hpp"
#include "gpkl/jaccard.hpp"
#include "gpkl/rng.hpp"
#include "gpkl/select.hpp"
#include "gpkl/simulate.hpp"
#include "gpkl/study.hpp"
#include "gpkl/window.hpp"
