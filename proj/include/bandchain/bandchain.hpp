#pragma once

#include "bandchain/band_core.hpp"
#include "bandchain/banded_lu.hpp"
#include "bandchain/chain_solver.hpp"
#include "bandchain/darboux.hpp"
#include "bandchain/errors.hpp"
#include "bandchain/generate.hpp"
#include "bandchain/io.hpp"
#include "bandchain/oracle.hpp"
