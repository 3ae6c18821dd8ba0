#pragma once

#include "nilsum/certificate.hpp"
#include "nilsum/decomp3.hpp"
#include "nilsum/decompn.hpp"
#include "nilsum/decomposition.hpp"
#include "nilsum/json.hpp"
#include "nilsum/matrix.hpp"
#include "nilsum/ring.hpp"
#include "nilsum/rng.hpp"
#include "nilsum/verify.hpp"
#include "nilsum/witness.hpp"
