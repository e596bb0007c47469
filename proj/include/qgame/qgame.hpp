#pragma once

#include "qgame/analysis/crossings.hpp"
#include "qgame/analysis/equilibrium.hpp"
#include "qgame/analysis/scenario1.hpp"
#include "qgame/analysis/scenario2.hpp"
#include "qgame/errors.hpp"
#include "qgame/game_io.hpp"
#include "qgame/games.hpp"
#include "qgame/linalg.hpp"
#include "qgame/protocol.hpp"
#include "qgame/report.hpp"
#include "qgame/reproduce.hpp"
