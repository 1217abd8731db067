// SPDX-License-Identifier: MIT
// Umbrella header.
#pragma once

#include "cauchy.hpp"
#include "cm.hpp"
#include "elliptic.hpp"
#include "flows.hpp"
#include "fock.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "monodromy.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "residue.hpp"
#include "series.hpp"
#include "suites.hpp"
