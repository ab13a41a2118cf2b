#pragma once

#include "errors.hpp"
#include "cxmat.hpp"
#include "eig.hpp"
#include "matching.hpp"
#include "moments.hpp"
#include "reduction.hpp"
#include "lattice.hpp"
#include "epsweep.hpp"
#include "dfrft.hpp"
#include "io.hpp"
