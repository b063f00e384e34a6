#pragma once

#include "eqlab/geometry/coherent.hpp"
#include "eqlab/geometry/metric.hpp"
#include "eqlab/geometry/polynomial.hpp"
#include "eqlab/geometry/weak.hpp"
