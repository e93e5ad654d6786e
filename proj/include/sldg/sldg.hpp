#pragma once

#include "sldg/errors.hpp"
#include "sldg/quadbasis.hpp"
#include "sldg/parallel.hpp"
#include "sldg/field.hpp"
#include "sldg/flow.hpp"
#include "sldg/transport.hpp"
#include "sldg/diffusion.hpp"
#include "sldg/split2d.hpp"
