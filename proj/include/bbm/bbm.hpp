#pragma once

#include "bbm/config.hpp"
#include "bbm/error.hpp"
#include "bbm/experiment.hpp"
#include "bbm/fft.hpp"
#include "bbm/field.hpp"
#include "bbm/grid.hpp"
#include "bbm/initial_data.hpp"
#include "bbm/parallel.hpp"
#include "bbm/picard.hpp"
#include "bbm/solver.hpp"
#include "bbm/spectral.hpp"
#include "bbm/symbols.hpp"
