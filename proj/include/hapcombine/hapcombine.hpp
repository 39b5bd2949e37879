#pragma once

#include "hapcombine/combine.hpp"
#include "hapcombine/core.hpp"
#include "hapcombine/distance.hpp"
#include "hapcombine/error.hpp"
#include "hapcombine/evaluate.hpp"
#include "hapcombine/io.hpp"
#include "hapcombine/simulate.hpp"
