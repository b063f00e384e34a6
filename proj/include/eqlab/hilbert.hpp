#pragma once

#include "eqlab/hilbert/affine.hpp"
#include "eqlab/hilbert/canonical.hpp"
#include "eqlab/hilbert/eigensolver.hpp"
#include "eqlab/hilbert/expm.hpp"
#include "eqlab/hilbert/fiducial.hpp"
#include "eqlab/hilbert/operator.hpp"
#include "eqlab/hilbert/params.hpp"
#include "eqlab/hilbert/serialize.hpp"
#include "eqlab/hilbert/spectrum.hpp"
#include "eqlab/hilbert/stencil.hpp"
