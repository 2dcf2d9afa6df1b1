#pragma once

// Umbrella header.

#include "fmn/amalgam.hpp"
#include "fmn/config.hpp"
#include "fmn/constants.hpp"
#include "fmn/core.hpp"
#include "fmn/corpus.hpp"
#include "fmn/dyadic.hpp"
#include "fmn/function.hpp"
#include "fmn/io.hpp"
#include "fmn/kernel.hpp"
#include "fmn/models.hpp"
#include "fmn/space.hpp"
#include "fmn/verify.hpp"
#include "fmn/witness.hpp"
