#pragma once

#include "fifcover/analysis.hpp"
#include "fifcover/attractor.hpp"
#include "fifcover/covering.hpp"
#include "fifcover/error.hpp"
#include "fifcover/geometry.hpp"
#include "fifcover/ifs_model.hpp"
#include "fifcover/io.hpp"
#include "fifcover/reference.hpp"
