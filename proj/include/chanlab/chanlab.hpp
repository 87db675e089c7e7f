#pragma once

// Finite-dimensional quantum information toolkit: multipartite states and
// entropies, channels in Kraus/Choi/dilation form, Petz and universal
// recovery, two stabilizer codes, and a toy model of subregion
// reconstruction.

#include "chanlab/channels.hpp"
#include "chanlab/core.hpp"
#include "chanlab/entropy.hpp"
#include "chanlab/holo.hpp"
#include "chanlab/json_io.hpp"
#include "chanlab/operator.hpp"
#include "chanlab/qec.hpp"
#include "chanlab/random.hpp"
#include "chanlab/recovery.hpp"
#include "chanlab/states.hpp"
