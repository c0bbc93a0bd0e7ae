#pragma once

#include "qpolar/types.hpp"
#include "qpolar/linalg_core.hpp"
#include "qpolar/quat_tensor.hpp"
#include "qpolar/group_forms.hpp"
#include "qpolar/polar_factors.hpp"
#include "qpolar/oracle.hpp"
#include "qpolar/completion.hpp"
#include "qpolar/polar.hpp"
#include "qpolar/quat_rep.hpp"
#include "qpolar/lorentz.hpp"
