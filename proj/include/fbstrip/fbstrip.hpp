#pragma once

#include "fbstrip/competitor.hpp"
#include "fbstrip/discrete_energy.hpp"
#include "fbstrip/error.hpp"
#include "fbstrip/experiments.hpp"
#include "fbstrip/grid.hpp"
#include "fbstrip/harmonic.hpp"
#include "fbstrip/io.hpp"
#include "fbstrip/minimize.hpp"
#include "fbstrip/oned.hpp"
#include "fbstrip/quadrature.hpp"
#include "fbstrip/report.hpp"
#include "fbstrip/support.hpp"
#include "fbstrip/theta.hpp"
