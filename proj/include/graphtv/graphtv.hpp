#ifndef GRAPHTV_GRAPHTV_HPP
#define GRAPHTV_GRAPHTV_HPP

#include "graphtv/bench.hpp"
#include "graphtv/chain.hpp"
#include "graphtv/denoise.hpp"
#include "graphtv/fl1d.hpp"
#include "graphtv/graph.hpp"
#include "graphtv/potts1d.hpp"
#include "graphtv/rng.hpp"
#include "graphtv/signals.hpp"
#include "graphtv/wavelets.hpp"

#endif
