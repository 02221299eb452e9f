#pragma once

#include "bottlab/errors.hpp"
#include "bottlab/matrix_core.hpp"
#include "bottlab/random.hpp"
#include "bottlab/parallel.hpp"
#include "bottlab/symbols.hpp"
#include "bottlab/loring.hpp"
#include "bottlab/model.hpp"
#include "bottlab/pairing.hpp"
#include "bottlab/asymptotics.hpp"
#include "bottlab/approx.hpp"
#include "bottlab/io.hpp"
