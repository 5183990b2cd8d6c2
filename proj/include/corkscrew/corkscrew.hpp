#pragma once

#include "corkscrew/f2.hpp"
#include "corkscrew/algebra.hpp"
#include "corkscrew/complex.hpp"
#include "corkscrew/map_system.hpp"
#include "corkscrew/homotopy.hpp"
#include "corkscrew/ucomplex.hpp"
#include "corkscrew/cfk.hpp"
#include "corkscrew/a0.hpp"
#include "corkscrew/morphisms.hpp"
#include "corkscrew/delta.hpp"
#include "corkscrew/connected.hpp"
#include "corkscrew/verdict.hpp"
#include "corkscrew/io.hpp"
