#pragma once

#include "analysis.hpp"
#include "attractor.hpp"
#include "calculus.hpp"
#include "code_string.hpp"
#include "errors.hpp"
#include "interpolation_data.hpp"
#include "io.hpp"
#include "polynomial.hpp"
#include "sifs.hpp"
#include "svg.hpp"
