#pragma once

#include "bztopo/bloch.hpp"
#include "bztopo/chiral.hpp"
#include "bztopo/cli.hpp"
#include "bztopo/errors.hpp"
#include "bztopo/grid.hpp"
#include "bztopo/invariants.hpp"
#include "bztopo/ktheory.hpp"
#include "bztopo/models.hpp"
#include "bztopo/version.hpp"
