#pragma once

// Umbrella header.

#include "secgame/curves.hpp"
#include "secgame/errors.hpp"
#include "secgame/fuzz.hpp"
#include "secgame/game.hpp"
#include "secgame/inefficiency.hpp"
#include "secgame/io.hpp"
#include "secgame/prospect.hpp"
#include "secgame/quantal.hpp"
#include "secgame/roots.hpp"
#include "secgame/spaces.hpp"
#include "secgame/sweep.hpp"
#include "secgame/version.hpp"
