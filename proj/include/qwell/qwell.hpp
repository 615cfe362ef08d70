#pragma once

// umbrella header

#include "qwell/errors.hpp"
#include "qwell/functionals.hpp"
#include "qwell/grid.hpp"
#include "qwell/halfline.hpp"
#include "qwell/io.hpp"
#include "qwell/occupation.hpp"
#include "qwell/physics.hpp"
#include "qwell/poisson.hpp"
#include "qwell/rate_fit.hpp"
#include "qwell/scf.hpp"
#include "qwell/spectrum.hpp"
#include "qwell/sweep.hpp"
#include "qwell/tridiagonal.hpp"
