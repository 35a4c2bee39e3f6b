#pragma once

#include "circlesim/action.hpp"
#include "circlesim/equivalence.hpp"
#include "circlesim/json_io.hpp"
#include "circlesim/measure.hpp"
#include "circlesim/random.hpp"
#include "circlesim/sim.hpp"
#include "circlesim/transform.hpp"
