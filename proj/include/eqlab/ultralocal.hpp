#pragma once

#include "eqlab/ultralocal/characteristic.hpp"
#include "eqlab/ultralocal/continuum.hpp"
#include "eqlab/ultralocal/current.hpp"
#include "eqlab/ultralocal/lattice.hpp"
#include "eqlab/ultralocal/profile.hpp"
#include "eqlab/ultralocal/site.hpp"
#include "eqlab/ultralocal/sturm_liouville.hpp"
