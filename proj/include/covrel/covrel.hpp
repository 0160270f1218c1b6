#pragma once

#include "covrel/rational.hpp"
#include "covrel/poly.hpp"
#include "covrel/trig.hpp"
#include "covrel/pieces.hpp"
#include "covrel/kernel.hpp"
#include "covrel/operators.hpp"
#include "covrel/kernel_calculus.hpp"
#include "covrel/sympoly.hpp"
#include "covrel/laurent.hpp"
#include "covrel/conditions.hpp"
#include "covrel/discretize.hpp"
#include "covrel/scenario_io.hpp"
#include "covrel/catalog.hpp"
#include "covrel/commands.hpp"
#include "covrel/sweep.hpp"
