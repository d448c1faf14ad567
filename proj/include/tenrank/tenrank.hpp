#pragma once

#include "tenrank/errors.hpp"
#include "tenrank/scalar.hpp"
#include "tenrank/matrix.hpp"
#include "tenrank/tensor.hpp"
#include "tenrank/states.hpp"
#include "tenrank/decomposition.hpp"
#include "tenrank/power.hpp"
#include "tenrank/als.hpp"
#include "tenrank/pencil.hpp"
#include "tenrank/rank_facts.hpp"
#include "tenrank/bilinear.hpp"
#include "tenrank/strassen.hpp"
#include "tenrank/slocc.hpp"
#include "tenrank/json_io.hpp"
