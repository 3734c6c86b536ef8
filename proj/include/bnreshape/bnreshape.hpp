#pragma once

// Umbrella header: discrete Bayesian networks with exact enumeration
// inference and verified state-space refinement/coarsening.

#include "bnreshape/types.hpp"
#include "bnreshape/network.hpp"
#include "bnreshape/joint.hpp"
#include "bnreshape/inference.hpp"
#include "bnreshape/graph_ops.hpp"
#include "bnreshape/equivalence.hpp"
#include "bnreshape/reshape_external.hpp"
#include "bnreshape/reshape_internal.hpp"
#include "bnreshape/verify.hpp"
#include "bnreshape/io.hpp"
