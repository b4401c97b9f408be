#pragma once

#include "flowdecomp/bench.hpp"
#include "flowdecomp/bounds.hpp"
#include "flowdecomp/decomposition.hpp"
#include "flowdecomp/flow_solvers.hpp"
#include "flowdecomp/fwa.hpp"
#include "flowdecomp/graph.hpp"
#include "flowdecomp/greedy.hpp"
#include "flowdecomp/instances.hpp"
#include "flowdecomp/io.hpp"
#include "flowdecomp/mccd.hpp"
#include "flowdecomp/oracle.hpp"
