#pragma once

#include "tra/errors.hpp"
#include "tra/special.hpp"
#include "tra/polynomials.hpp"
#include "tra/identities.hpp"
#include "tra/tridiagonal.hpp"
#include "tra/quadrature.hpp"
#include "tra/ode.hpp"
#include "tra/classes.hpp"
#include "tra/series.hpp"
#include "tra/verify.hpp"
#include "tra/quantum.hpp"
