#pragma once

// Umbrella header for the RDHEI codec library.

#include "rdhei/analysis.hpp"
#include "rdhei/arith.hpp"
#include "rdhei/bits.hpp"
#include "rdhei/blocks.hpp"
#include "rdhei/crypto.hpp"
#include "rdhei/embedding.hpp"
#include "rdhei/error.hpp"
#include "rdhei/pipeline.hpp"
#include "rdhei/prediction.hpp"
#include "rdhei/raster.hpp"
#include "rdhei/wire.hpp"
