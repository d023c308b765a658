#pragma once

#include "suita/bergman.hpp"
#include "suita/errors.hpp"
#include "suita/geometry.hpp"
#include "suita/green.hpp"
#include "suita/io.hpp"
#include "suita/laplace.hpp"
#include "suita/locus.hpp"
#include "suita/parallel.hpp"
#include "suita/periods.hpp"
#include "suita/quadrature.hpp"
