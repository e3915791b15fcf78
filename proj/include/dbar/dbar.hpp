#pragma once

#include "dbar/density.hpp"
#include "dbar/errors.hpp"
#include "dbar/green.hpp"
#include "dbar/grid.hpp"
#include "dbar/parallel.hpp"
#include "dbar/polar.hpp"
#include "dbar/product_ops.hpp"
#include "dbar/quadrature.hpp"
#include "dbar/random.hpp"
#include "dbar/rational.hpp"
#include "dbar/sharpness.hpp"
#include "dbar/slice.hpp"
#include "dbar/slice_ops.hpp"
#include "dbar/sobolev.hpp"
