#pragma once

// Everything except the brute-force oracle (ibba/oracle.hpp) and the
// built-in fixtures (ibba/fixtures.hpp).

#include "ibba/expression.hpp"
#include "ibba/index_scheme.hpp"
#include "ibba/penalty.hpp"
#include "ibba/problem.hpp"
#include "ibba/problem_file.hpp"
#include "ibba/report.hpp"
#include "ibba/solver.hpp"
#include "ibba/svg.hpp"
#include "ibba/trace.hpp"
