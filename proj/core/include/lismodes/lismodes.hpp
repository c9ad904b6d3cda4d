#pragma once

#include "lismodes/capacity.hpp"
#include "lismodes/emkernel.hpp"
#include "lismodes/errors.hpp"
#include "lismodes/geometry.hpp"
#include "lismodes/linkbudget.hpp"
#include "lismodes/modes.hpp"
