#pragma once

#include "randeff/birkhoff.hpp"
#include "randeff/core.hpp"
#include "randeff/enumeration.hpp"
#include "randeff/expost.hpp"
#include "randeff/generate.hpp"
#include "randeff/instance_io.hpp"
#include "randeff/matching.hpp"
#include "randeff/pareto.hpp"
#include "randeff/rational.hpp"
#include "randeff/render.hpp"
#include "randeff/robust.hpp"
#include "randeff/sat_reduction.hpp"
#include "randeff/sdeff.hpp"
#include "randeff/simplex.hpp"
