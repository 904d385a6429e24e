#pragma once

#include "chandisc/linalg.hpp"
#include "chandisc/random.hpp"
#include "chandisc/channels.hpp"
#include "chandisc/channel_io.hpp"
#include "chandisc/sdp.hpp"
#include "chandisc/norms.hpp"
#include "chandisc/locc.hpp"
#include "chandisc/chain.hpp"
#include "chandisc/haar.hpp"
