#pragma once

#include "couponq/asymptotics.hpp"
#include "couponq/bank_spec.hpp"
#include "couponq/coupon_core.hpp"
#include "couponq/exact_rational.hpp"
#include "couponq/json_io.hpp"
#include "couponq/quadrature.hpp"
#include "couponq/report.hpp"
#include "couponq/rng.hpp"
#include "couponq/simulator.hpp"
#include "couponq/special.hpp"
#include "couponq/validation.hpp"
