#pragma once

// Umbrella header for the hopset toolkit.

#include "hopset/builder.hpp"
#include "hopset/cluster.hpp"
#include "hopset/costs.hpp"
#include "hopset/generators.hpp"
#include "hopset/graph.hpp"
#include "hopset/io.hpp"
#include "hopset/layer.hpp"
#include "hopset/path_tree.hpp"
#include "hopset/query.hpp"
#include "hopset/reduction.hpp"
#include "hopset/ruling.hpp"
#include "hopset/schedule.hpp"
#include "hopset/serialize.hpp"
#include "hopset/spt.hpp"
#include "hopset/spt_reduced.hpp"
