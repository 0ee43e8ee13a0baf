#pragma once

#include "mifit/errors.hpp"
#include "mifit/linalg.hpp"
#include "mifit/measure.hpp"
#include "mifit/gramian.hpp"
#include "mifit/mi_solver.hpp"
#include "mifit/deco_solver.hpp"
#include "mifit/lca.hpp"
