#pragma once

#include "matchbound/analysis.hpp"
#include "matchbound/digraph.hpp"
#include "matchbound/extremal.hpp"
#include "matchbound/io.hpp"
#include "matchbound/market.hpp"
#include "matchbound/normal_form.hpp"
#include "matchbound/rng.hpp"
#include "matchbound/solvers.hpp"
