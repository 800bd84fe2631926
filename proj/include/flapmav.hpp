#pragma once

#include "flapmav/analysis.hpp"
#include "flapmav/bio_metrics.hpp"
#include "flapmav/config.hpp"
#include "flapmav/constants.hpp"
#include "flapmav/csv.hpp"
#include "flapmav/design_problem.hpp"
#include "flapmav/design.hpp"
#include "flapmav/drivetrain.hpp"
#include "flapmav/errors.hpp"
#include "flapmav/evaluation.hpp"
#include "flapmav/flapper_dynamics.hpp"
#include "flapmav/optim/hypervolume.hpp"
#include "flapmav/optim/isres.hpp"
#include "flapmav/optim/moea.hpp"
#include "flapmav/optim/normalize.hpp"
#include "flapmav/optim/problem.hpp"
#include "flapmav/optim/sweep.hpp"
#include "flapmav/performance.hpp"
#include "flapmav/quasi_steady_aero.hpp"
#include "flapmav/tandem_interference.hpp"
#include "flapmav/wing_geometry.hpp"
