#pragma once

#include "chordkit/brdf.hpp"
#include "chordkit/chain.hpp"
#include "chordkit/config.hpp"
#include "chordkit/error.hpp"
#include "chordkit/height.hpp"
#include "chordkit/image.hpp"
#include "chordkit/image_io.hpp"
#include "chordkit/log.hpp"
#include "chordkit/loss.hpp"
#include "chordkit/material.hpp"
#include "chordkit/material_io.hpp"
#include "chordkit/metrics.hpp"
#include "chordkit/optim.hpp"
#include "chordkit/parallel.hpp"
#include "chordkit/random.hpp"
#include "chordkit/render.hpp"
#include "chordkit/vec.hpp"
