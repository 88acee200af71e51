#pragma once

// Umbrella header for the whole library.

#include "coneinf/bench.hpp"
#include "coneinf/cone.hpp"
#include "coneinf/core.hpp"
#include "coneinf/curve.hpp"
#include "coneinf/generate.hpp"
#include "coneinf/io.hpp"
#include "coneinf/oracle.hpp"
#include "coneinf/qr.hpp"
#include "coneinf/reductions.hpp"
#include "coneinf/solver.hpp"
#include "coneinf/steps.hpp"
