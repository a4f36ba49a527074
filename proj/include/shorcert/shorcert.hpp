#pragma once

#include "shorcert/arith.hpp"
#include "shorcert/binomial.hpp"
#include "shorcert/cert.hpp"
#include "shorcert/circuit.hpp"
#include "shorcert/error.hpp"
#include "shorcert/io.hpp"
#include "shorcert/noise.hpp"
#include "shorcert/numtheory.hpp"
#include "shorcert/permutation.hpp"
#include "shorcert/qpe.hpp"
#include "shorcert/rng.hpp"
#include "shorcert/shor.hpp"
#include "shorcert/sim.hpp"
