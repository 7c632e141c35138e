#pragma once

// Convenience umbrella for the whole detumble library.

#include "detumble/control.hpp"
#include "detumble/dynamics.hpp"
#include "detumble/errors.hpp"
#include "detumble/format.hpp"
#include "detumble/linalg.hpp"
#include "detumble/matrix.hpp"
#include "detumble/quaternion.hpp"
#include "detumble/scenario.hpp"
#include "detumble/simulation.hpp"
#include "detumble/spacecraft.hpp"
#include "detumble/svg_plot.hpp"
#include "detumble/telemetry.hpp"
#include "detumble/verdict.hpp"
