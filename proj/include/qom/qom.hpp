#pragma once

#include "qom/config.hpp"
#include "qom/errors.hpp"
#include "qom/figures.hpp"
#include "qom/grid.hpp"
#include "qom/noise.hpp"
#include "qom/oracle/langevin.hpp"
#include "qom/oracle/linearized.hpp"
#include "qom/oracle/monte_carlo.hpp"
#include "qom/oracle/welch.hpp"
#include "qom/parallel.hpp"
#include "qom/params.hpp"
#include "qom/sensitivity.hpp"
#include "qom/spectral.hpp"
#include "qom/steady_state.hpp"
#include "qom/sweep.hpp"
#include "qom/verify.hpp"
