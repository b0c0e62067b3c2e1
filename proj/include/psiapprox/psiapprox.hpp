#pragma once

#include <psiapprox/best_approx.hpp>
#include <psiapprox/calculus.hpp>
#include <psiapprox/errors.hpp>
#include <psiapprox/kernels.hpp>
#include <psiapprox/lp_norms.hpp>
#include <psiapprox/math.hpp>
#include <psiapprox/order_harness.hpp>
#include <psiapprox/psi.hpp>
#include <psiapprox/trig_poly.hpp>
#include <psiapprox/version.hpp>
