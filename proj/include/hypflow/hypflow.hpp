#pragma once

#include "hypflow/arcs.hpp"
#include "hypflow/collar.hpp"
#include "hypflow/constants.hpp"
#include "hypflow/errors.hpp"
#include "hypflow/flow.hpp"
#include "hypflow/geodesic.hpp"
#include "hypflow/measure.hpp"
#include "hypflow/mobius.hpp"
#include "hypflow/quadrature.hpp"
#include "hypflow/report.hpp"
#include "hypflow/rng.hpp"
#include "hypflow/stats.hpp"
#include "hypflow/surface.hpp"
