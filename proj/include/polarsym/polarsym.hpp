#pragma once

#include "core.hpp"
#include "green.hpp"
#include "io.hpp"
#include "measure.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "rearrange.hpp"
#include "transforms.hpp"
#include "verify.hpp"
