#pragma once

#include "hjt/calculus.hpp"
#include "hjt/dual.hpp"
#include "hjt/dynamics.hpp"
#include "hjt/error.hpp"
#include "hjt/expression.hpp"
#include "hjt/field.hpp"
#include "hjt/foliations.hpp"
#include "hjt/grid.hpp"
#include "hjt/hj_hamiltonian.hpp"
#include "hjt/hj_lagrangian.hpp"
#include "hjt/integrate.hpp"
#include "hjt/linalg.hpp"
#include "hjt/parallel.hpp"
#include "hjt/report.hpp"
#include "hjt/systems/geodetic.hpp"
#include "hjt/systems/monopole.hpp"
#include "hjt/systems/registry.hpp"
#include "hjt/systems/rigid_body.hpp"
#include "hjt/systems/su2.hpp"
#include "hjt/systems/time_dependent.hpp"
