#pragma once

#include "qlwave/errors.hpp"
#include "qlwave/grid.hpp"
#include "qlwave/monotone_cubic.hpp"
#include "qlwave/wavespeed.hpp"
#include "qlwave/initdata.hpp"
#include "qlwave/solver.hpp"
#include "qlwave/trajectory.hpp"
#include "qlwave/diagnostics.hpp"
#include "qlwave/run.hpp"
#include "qlwave/characteristics.hpp"
#include "qlwave/scenario.hpp"
#include "qlwave/harness.hpp"
#include "qlwave/io.hpp"
