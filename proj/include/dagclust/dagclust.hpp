#pragma once

#include "dagclust/caps.hpp"
#include "dagclust/clustering.hpp"
#include "dagclust/dag.hpp"
#include "dagclust/error.hpp"
#include "dagclust/io.hpp"
#include "dagclust/random.hpp"
#include "dagclust/reductions.hpp"
#include "dagclust/solvers.hpp"
