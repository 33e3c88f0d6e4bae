#pragma once

#include "qcarm/qsim/grover_angles.hpp"
#include "qcarm/qsim/measurement.hpp"
#include "qcarm/qsim/operations.hpp"
#include "qcarm/qsim/register_layout.hpp"
#include "qcarm/qsim/state_vector.hpp"
