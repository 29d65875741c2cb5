#pragma once

#include "pdir/common.hpp"
#include "pdir/dag.hpp"
#include "pdir/family.hpp"
#include "pdir/graph.hpp"
#include "pdir/inference.hpp"
#include "pdir/io.hpp"
#include "pdir/linalg.hpp"
#include "pdir/prior.hpp"
#include "pdir/rng.hpp"
#include "pdir/table.hpp"
#include "pdir/verification.hpp"
