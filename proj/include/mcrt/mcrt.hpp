#pragma once

#include "mcrt/errors.hpp"
#include "mcrt/experiments.hpp"
#include "mcrt/graph.hpp"
#include "mcrt/io.hpp"
#include "mcrt/laplace.hpp"
#include "mcrt/parallel.hpp"
#include "mcrt/path.hpp"
#include "mcrt/planar.hpp"
#include "mcrt/rng.hpp"
#include "mcrt/sha1.hpp"
#include "mcrt/stats.hpp"
#include "mcrt/walk.hpp"
