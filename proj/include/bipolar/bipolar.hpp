#pragma once

#include "bipolar/errors.hpp"
#include "bipolar/vec.hpp"
#include "bipolar/specfun.hpp"
#include "bipolar/quadrature.hpp"
#include "bipolar/polynomial.hpp"
#include "bipolar/cartesian.hpp"
#include "bipolar/charge.hpp"
#include "bipolar/expansion.hpp"
#include "bipolar/delta_series.hpp"
#include "bipolar/energy.hpp"
#include "bipolar/perturb.hpp"
#include "bipolar/density_spec.hpp"
