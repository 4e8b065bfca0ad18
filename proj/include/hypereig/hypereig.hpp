#pragma once

#include "common.hpp"
#include "stp.hpp"
#include "hypermatrix.hpp"
#include "hypervector.hpp"
#include "linalg.hpp"
#include "chebyshev.hpp"
#include "pencil.hpp"
#include "type_map.hpp"
#include "u_eigen.hpp"
