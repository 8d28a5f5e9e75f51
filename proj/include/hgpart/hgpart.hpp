// hgpart.hpp - umbrella header for the library (the CLI lives in cli.hpp)
#pragma once

#include "hgpart/coarse_build.hpp"
#include "hgpart/coarsening.hpp"
#include "hgpart/driver.hpp"
#include "hgpart/generator.hpp"
#include "hgpart/hypergraph.hpp"
#include "hgpart/io.hpp"
#include "hgpart/matching.hpp"
#include "hgpart/neighborhood.hpp"
#include "hgpart/oracle.hpp"
#include "hgpart/parallel.hpp"
#include "hgpart/partitioning.hpp"
#include "hgpart/refinement.hpp"
#include "hgpart/types.hpp"
