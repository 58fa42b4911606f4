// sodepol.hpp
// Umbrella include.

#pragma once

#include "sodepol/error.hpp"
#include "sodepol/linalg.hpp"
#include "sodepol/qstate.hpp"
#include "sodepol/channel.hpp"
#include "sodepol/optics.hpp"
#include "sodepol/skdecomp.hpp"
#include "sodepol/tomography.hpp"
#include "sodepol/serialize.hpp"
#include "sodepol/experiment.hpp"
