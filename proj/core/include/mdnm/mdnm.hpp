#pragma once

#include "mdnm/allele_tree.hpp"
#include "mdnm/clone_mutant.hpp"
#include "mdnm/coding_walks.hpp"
#include "mdnm/enumeration.hpp"
#include "mdnm/errors.hpp"
#include "mdnm/exact_dist.hpp"
#include "mdnm/experiments.hpp"
#include "mdnm/forest_io.hpp"
#include "mdnm/genealogy.hpp"
#include "mdnm/gof.hpp"
#include "mdnm/law_spec.hpp"
#include "mdnm/offspring_laws.hpp"
#include "mdnm/parallel.hpp"
#include "mdnm/random.hpp"
#include "mdnm/scaling_limits.hpp"
#include "mdnm/types.hpp"
#include "mdnm/verify.hpp"
