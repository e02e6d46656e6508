#pragma once

#include "fradi/adi_stepper.hpp"
#include "fradi/errors.hpp"
#include "fradi/field.hpp"
#include "fradi/fractional_operator.hpp"
#include "fradi/grunwald.hpp"
#include "fradi/scenario.hpp"
#include "fradi/siv_model.hpp"
#include "fradi/slice_solver.hpp"
#include "fradi/unsplit_oracle.hpp"
