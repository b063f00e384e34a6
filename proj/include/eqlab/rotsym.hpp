#pragma once

#include "eqlab/rotsym/compare.hpp"
#include "eqlab/rotsym/flow.hpp"
#include "eqlab/rotsym/fock_oracle.hpp"
#include "eqlab/rotsym/model.hpp"
#include "eqlab/rotsym/moments.hpp"
