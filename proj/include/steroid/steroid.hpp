#pragma once

// Umbrella header: symmetric tensor decomposition into real linear
// combinations of symmetric unit rank-1 terms, by recursive symmetric
// eigendecompositions and minimum-norm least squares.

#include "steroid/decompose.hpp"
#include "steroid/eig.hpp"
#include "steroid/errors.hpp"
#include "steroid/indexing.hpp"
#include "steroid/io.hpp"
#include "steroid/lstsq.hpp"
#include "steroid/matrix.hpp"
#include "steroid/oracle.hpp"
#include "steroid/random.hpp"
#include "steroid/symtensor.hpp"
