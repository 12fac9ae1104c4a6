// Umbrella header.
#pragma once

#include "fingap/closing.hpp"
#include "fingap/config.hpp"
#include "fingap/dressing.hpp"
#include "fingap/frame.hpp"
#include "fingap/hyperbolic.hpp"
#include "fingap/io.hpp"
#include "fingap/potential.hpp"
#include "fingap/reconstruct.hpp"
#include "fingap/sl2.hpp"
#include "fingap/spectral.hpp"
