#pragma once

// Umbrella header: exact-arithmetic unit-demand markets, the descending
// price auction for maximum market-clearing prices, verification, and the
// independent pricing oracles.

#include "clearing/auction.hpp"
#include "clearing/errors.hpp"
#include "clearing/market.hpp"
#include "clearing/matching.hpp"
#include "clearing/rational.hpp"
#include "clearing/skew.hpp"
#include "clearing/strategy.hpp"
