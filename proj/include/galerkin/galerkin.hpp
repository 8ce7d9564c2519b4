#pragma once

// Everything except the FFT fast path (galerkin/fast_nonlinearity.hpp, needs FFTW3).

#include "galerkin/errors.hpp"
#include "galerkin/lattice.hpp"
#include "galerkin/state.hpp"
#include "galerkin/forcing.hpp"
#include "galerkin/dynamics.hpp"
#include "galerkin/integrator.hpp"
#include "galerkin/envelopes.hpp"
#include "galerkin/estimates.hpp"
#include "galerkin/snapshot.hpp"
#include "galerkin/oracle.hpp"
#include "galerkin/oracle_suite.hpp"
#include "galerkin/scenario.hpp"
