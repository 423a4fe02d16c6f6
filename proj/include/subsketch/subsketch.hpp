#pragma once

#include "subsketch/band_polynomial.hpp"
#include "subsketch/coreset1d.hpp"
#include "subsketch/count_sketch.hpp"
#include "subsketch/hard_instance.hpp"
#include "subsketch/incoherent.hpp"
#include "subsketch/kernels.hpp"
#include "subsketch/l1_sketch_2d.hpp"
#include "subsketch/lewis_weights.hpp"
#include "subsketch/linalg.hpp"
#include "subsketch/mollified_tukey.hpp"
#include "subsketch/parallel.hpp"
#include "subsketch/quadrature.hpp"
#include "subsketch/query_matrix.hpp"
#include "subsketch/rng.hpp"
#include "subsketch/sketches.hpp"
#include "subsketch/spectrum.hpp"
#include "subsketch/stable_sketch.hpp"
#include "subsketch/tukey_estimator.hpp"
#include "subsketch/wht.hpp"
