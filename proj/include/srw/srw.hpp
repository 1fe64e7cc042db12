#ifndef SRW_SRW_HPP
#define SRW_SRW_HPP

#include "srw/config.hpp"
#include "srw/events.hpp"
#include "srw/observe.hpp"
#include "srw/paths.hpp"
#include "srw/reconstruct.hpp"
#include "srw/records.hpp"
#include "srw/rng.hpp"
#include "srw/scenery.hpp"
#include "srw/walk.hpp"

#endif
