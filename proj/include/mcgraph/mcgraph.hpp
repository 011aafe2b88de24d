#pragma once

#include "mcgraph/centrality.hpp"
#include "mcgraph/dictionary.hpp"
#include "mcgraph/error.hpp"
#include "mcgraph/features.hpp"
#include "mcgraph/generators.hpp"
#include "mcgraph/graph.hpp"
#include "mcgraph/io.hpp"
#include "mcgraph/laplacian.hpp"
#include "mcgraph/pipeline.hpp"
#include "mcgraph/random.hpp"
#include "mcgraph/spectral.hpp"
#include "mcgraph/walk_stats.hpp"
