#pragma once

#include "index_set.hpp"
#include "model.hpp"
#include "gaps.hpp"
#include "rng.hpp"
#include "environment.hpp"
#include "agent.hpp"
#include "phased.hpp"
#include "sucb.hpp"
#include "simulate.hpp"
#include "theory.hpp"
#include "structures.hpp"
#include "io.hpp"
#include "stats.hpp"
#include "experiment.hpp"
#include "suite.hpp"
