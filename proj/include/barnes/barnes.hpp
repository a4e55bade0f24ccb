#pragma once

#include "barnes_beta.hpp"
#include "beta_params.hpp"
#include "error.hpp"
#include "eta.hpp"
#include "gamma_params.hpp"
#include "moments.hpp"
#include "multiple_gamma.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "s_operator.hpp"
#include "sampling.hpp"
#include "selberg.hpp"
#include "shintani.hpp"
